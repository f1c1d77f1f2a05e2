#include "ppml/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ppml {

namespace {

bool parse_header(const std::string& line, std::uint64_t& domain_size) {
  if (line.rfind("#", 0) != 0) return false;
  const auto pos = line.find("domain_size=");
  if (pos == std::string::npos) return true;  // a plain comment line
  domain_size = std::stoull(line.substr(pos + 12));
  return true;
}

}  // namespace

SampleSequence read_samples(std::istream& in) {
  SampleSequence seq;
  std::string line;
  std::uint64_t declared = 0;
  bool first = true;
  std::uint64_t max_sym = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (parse_header(line, declared)) continue;
    }
    std::size_t idx = 0;
    const long long v = std::stoll(line, &idx);
    if (v < 0) throw std::invalid_argument("read_samples: negative symbol");
    seq.symbols.push_back(static_cast<Symbol>(v));
    max_sym = std::max<std::uint64_t>(max_sym, static_cast<std::uint64_t>(v));
  }
  seq.domain_size = declared > 0 ? declared : (seq.symbols.empty() ? 0 : max_sym + 1);
  if (declared > 0)
    for (Symbol s : seq.symbols)
      if (s >= declared)
        throw std::invalid_argument("read_samples: symbol exceeds declared domain_size");
  return seq;
}

SampleSequence read_sample_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sample file: " + path);
  return read_samples(in);
}

void write_sample_file(const std::string& path, const SampleSequence& seq) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "# domain_size=" << seq.domain_size << "\n";
  for (Symbol s : seq.symbols) out << s << "\n";
}

Histogram read_histogram_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open histogram file: " + path);
  Histogram h;
  std::string line;
  std::uint64_t declared = 0;
  bool first = true;
  std::uint64_t max_sym = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (parse_header(line, declared)) continue;
    }
    std::istringstream ls(line);
    long long sym = 0, cnt = 0;
    ls >> sym >> cnt;
    if (!ls || sym < 0 || cnt < 0)
      throw std::invalid_argument("read_histogram_file: bad line: " + line);
    if (cnt > 0) {
      h.counts[static_cast<Symbol>(sym)] += static_cast<std::uint64_t>(cnt);
      h.total += static_cast<std::uint64_t>(cnt);
    }
    max_sym = std::max<std::uint64_t>(max_sym, static_cast<std::uint64_t>(sym));
  }
  h.domain_size = declared > 0 ? declared : (h.counts.empty() ? 0 : max_sym + 1);
  return h;
}

void write_histogram_file(const std::string& path, const Histogram& hist) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "# domain_size=" << hist.domain_size << "\n";
  for (const auto& [sym, c] : hist.counts) out << sym << "\t" << c << "\n";
}

}  // namespace ppml
