#include "mertens/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "mertens/error.hpp"

namespace mertens {

namespace {

constexpr const char* kMagic = "# mertens-checkpoint";

std::vector<std::string> split(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::string join(const std::vector<std::string>& toks) {
  std::string s;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) s += ' ';
    s += toks[i];
  }
  return s;
}

void write_header(std::ostream& out, const CheckpointLog::Header& header, const std::vector<std::string>& columns) {
  out << kMagic << '\n' << "version " << CheckpointLog::kVersion << '\n';
  for (const auto& [k, v] : header) out << k << ' ' << v << '\n';
  out << "columns " << join(columns) << '\n';
}

}  // namespace

CheckpointLog::CheckpointLog(std::string path, Header header, std::vector<std::string> columns,
                             const std::function<bool(const Record&)>& keep)
    : path_(std::move(path)) {
  namespace fs = std::filesystem;
  if (fs::exists(path_)) {
    std::ifstream in(path_);
    if (!in) throw checkpoint_error("cannot read checkpoint " + path_);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    bool complete_last = !text.empty() && text.back() == '\n';
    std::vector<std::string> lines;
    std::istringstream ls(text);
    for (std::string line; std::getline(ls, line);) lines.push_back(line);
    if (!complete_last && !lines.empty()) lines.pop_back();

    std::size_t i = 0;
    auto expect = [&](const std::string& want) {
      if (i >= lines.size() || lines[i] != want)
        throw checkpoint_error("incompatible checkpoint " + path_ + ": expected '" + want + "', found '" +
                               (i < lines.size() ? lines[i] : std::string("<eof>")) + "'");
      ++i;
    };
    expect(kMagic);
    expect("version " + std::to_string(kVersion));
    for (const auto& [k, v] : header) expect(k + " " + v);
    expect("columns " + join(columns));
    for (; i < lines.size(); ++i) {
      Record rec = split(lines[i]);
      if (rec.size() != columns.size() || !keep(rec)) break;
      resumed_.push_back(std::move(rec));
    }
  }
  // Rewrite header plus the kept prefix, then append from there.
  std::string tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw checkpoint_error("cannot write checkpoint " + tmp);
    write_header(out, header, columns);
    for (const auto& rec : resumed_) out << join(rec) << '\n';
    if (!out) throw checkpoint_error("write failed for " + tmp);
  }
  fs::rename(tmp, path_);
  out_.open(path_, std::ios::app);
  if (!out_) throw checkpoint_error("cannot append to checkpoint " + path_);
}

void CheckpointLog::append(const Record& record) { out_ << join(record) << '\n'; }

void CheckpointLog::flush() {
  out_.flush();
  if (!out_) throw checkpoint_error("write failed for " + path_);
}

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hexfloat(const std::string& text) {
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') throw checkpoint_error("malformed float in checkpoint: " + text);
  return v;
}

std::string decimal17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace mertens
