#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ppml/io.hpp"

using namespace ppml;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("iotest_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("sample file round trip with declared domain") {
  TempFile f("samples.txt");
  SampleSequence seq;
  seq.domain_size = 9;
  seq.symbols = {3, 3, 0, 8, 1};
  write_sample_file(f.path, seq);

  const SampleSequence back = read_sample_file(f.path);
  CHECK(back.domain_size == 9);
  CHECK(back.symbols == seq.symbols);
}

TEST_CASE("sample stream without header infers the domain") {
  std::istringstream in("4\n2\n2\n0\n");
  const SampleSequence seq = read_samples(in);
  CHECK(seq.domain_size == 5);
  CHECK(seq.symbols == std::vector<Symbol>{4, 2, 2, 0});
}

TEST_CASE("declared domain is enforced") {
  std::istringstream in("# domain_size=3\n0\n5\n");
  CHECK_THROWS_AS(read_samples(in), std::invalid_argument);
}

TEST_CASE("negative symbols are rejected") {
  std::istringstream in("2\n-1\n");
  CHECK_THROWS_AS(read_samples(in), std::invalid_argument);
}

TEST_CASE("histogram file round trip") {
  TempFile f("hist.tsv");
  Histogram h;
  h.domain_size = 12;
  h.counts[1] = 4;
  h.counts[7] = 2;
  h.total = 6;
  write_histogram_file(f.path, h);

  const Histogram back = read_histogram_file(f.path);
  CHECK(back.domain_size == 12);
  CHECK(back.total == 6);
  CHECK(back.count_of(1) == 4);
  CHECK(back.count_of(7) == 2);
  CHECK(back.count_of(0) == 0);
}

}  // TEST_SUITE
