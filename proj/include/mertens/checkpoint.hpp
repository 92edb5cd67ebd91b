#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace mertens {

// Line-oriented resumable log:
//
//   # mertens-checkpoint
//   version 1
//   <key> <value>          one line per header field, in order
//   columns <c1> <c2> ...
//   <record tokens ...>    one line per record
//
// Opening an existing file whose header differs from the expected one is a
// checkpoint_error; a truncated trailing line is dropped.
class CheckpointLog {
 public:
  using Header = std::vector<std::pair<std::string, std::string>>;
  using Record = std::vector<std::string>;

  // Creates the file, or reopens it and keeps the records accepted by
  // `keep`. Records are kept as a prefix: the first rejected record and
  // everything after it are discarded and the file is rewritten.
  CheckpointLog(std::string path, Header header, std::vector<std::string> columns,
                const std::function<bool(const Record&)>& keep);

  const std::vector<Record>& resumed() const { return resumed_; }
  void append(const Record& record);
  void flush();
  const std::string& path() const { return path_; }

  static constexpr int kVersion = 1;

 private:
  std::string path_;
  std::vector<Record> resumed_;
  std::ofstream out_;
};

std::string hexfloat(double v);
double parse_hexfloat(const std::string& text);
std::string decimal17(double v);

}  // namespace mertens
