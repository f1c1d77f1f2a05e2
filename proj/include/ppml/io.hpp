#ifndef PPML_IO_HPP_
#define PPML_IO_HPP_

#include <iosfwd>
#include <string>

#include "ppml/types.hpp"

namespace ppml {

/// Sample file: one non-negative integer symbol per line; an optional first
/// line `# domain_size=N` pins the domain (otherwise max symbol + 1).
SampleSequence read_sample_file(const std::string& path);
SampleSequence read_samples(std::istream& in);
void write_sample_file(const std::string& path, const SampleSequence& seq);

/// Histogram file: `symbol<TAB>count` lines, same optional header.
Histogram read_histogram_file(const std::string& path);
void write_histogram_file(const std::string& path, const Histogram& hist);

}  // namespace ppml

#endif  // PPML_IO_HPP_
