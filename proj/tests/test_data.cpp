#include <gtest/gtest.h>

#include <fstream>

#include "mtd/data.hpp"
#include "mtd/error.hpp"
#include "support.hpp"

namespace mtd {
namespace {

std::string write(const testing::TempDir& dir, const std::string& name, const std::string& text) {
  const auto path = dir.file(name);
  std::ofstream(path) << text;
  return path;
}

TEST(Ingest, PlainColumnWithHeader) {
  testing::TempDir dir;
  const auto s = ingest_series(write(dir, "a.csv", "x\n0\n1\n0\n"));
  EXPECT_EQ(s.values, (std::vector<Symbol>{0, 1, 0}));
  EXPECT_EQ(s.alphabet.labels(), (std::vector<std::string>{"0", "1"}));
}

TEST(Ingest, HeaderlessAndReversed) {
  testing::TempDir dir;
  IngestOptions o;
  o.reverse = true;
  const auto s = ingest_series(write(dir, "b.csv", "a\nb\nc\n"), o);
  EXPECT_EQ(s.alphabet.labels(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(s.values, (std::vector<Symbol>{2, 1, 0}));
}

TEST(Ingest, NamedColumnAndExplicitHeader) {
  testing::TempDir dir;
  const auto path = write(dir, "c.csv", "date,temp\nd1,hi\nd2,lo\nd3,hi\n");
  IngestOptions o;
  o.column = "temp";
  EXPECT_EQ(ingest_series(path, o).values, (std::vector<Symbol>{0, 1, 0}));
  o.column = "1";
  EXPECT_EQ(ingest_series(path, o).size(), 3u);
  o.column = "missing";
  EXPECT_THROW(ingest_series(path, o), Error);
  IngestOptions no_header;
  no_header.header = HeaderMode::kNo;
  EXPECT_EQ(ingest_series(write(dir, "d.csv", "x\ny\nx\n"), no_header).size(), 3u);
}

TEST(Ingest, NaPolicies) {
  testing::TempDir dir;
  const auto embedded = write(dir, "e.csv", "x\n0\nNA\n1\n");
  try {
    ingest_series(embedded);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  IngestOptions drop;
  drop.na_policy = NaPolicy::kDropEdges;
  EXPECT_THROW(ingest_series(embedded, drop), Error);
  const auto edges = write(dir, "f.csv", "x\nNA\n0\n1\n1\n\n");
  EXPECT_EQ(ingest_series(edges, drop).values, (std::vector<Symbol>{0, 1, 1}));
  EXPECT_THROW(ingest_series(edges), Error);
}

TEST(Ingest, SingleSymbolOrMissingFileFails) {
  testing::TempDir dir;
  EXPECT_THROW(ingest_series(write(dir, "g.csv", "x\n1\n1\n")), Error);
  EXPECT_THROW(ingest_series(dir.file("none.csv")), Error);
}

TEST(Ingest, FixedAlphabet) {
  testing::TempDir dir;
  const auto path = write(dir, "h.csv", "x\n1\n1\n");
  const auto s = ingest_series(path, Alphabet({"0", "1"}));
  EXPECT_EQ(s.values, (std::vector<Symbol>{1, 1}));
  EXPECT_THROW(ingest_series(path, Alphabet({"a", "b"})), Error);
}

TEST(Discretize, PublishedTemperatureBoundary) {
  const std::vector<double> series{12.046, 29.8, 20.0, 21.0};
  const auto d = discretize(series, 2);
  EXPECT_NEAR(d.edges[1], 20.923, 1e-12);
  EXPECT_EQ(d.sample.values, (std::vector<Symbol>{0, 1, 0, 1}));
  EXPECT_EQ(d.sample.alphabet.labels(), (std::vector<std::string>{"1", "2"}));
}

TEST(Discretize, EdgesFollowTheFormulaAndBoundariesGoUp) {
  const std::vector<double> series{0.0, 1.0, 2.0, 3.0, 4.0, 0.5};
  const auto d = discretize(series, 4);
  EXPECT_EQ(d.edges, (std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0}));
  EXPECT_EQ(d.sample.values, (std::vector<Symbol>{0, 1, 2, 3, 3, 0}));
  const std::vector<double> odd{0.1, 0.7, 0.3};
  const auto e = discretize(odd, 3);
  for (int i = 0; i <= 3; ++i) EXPECT_EQ(e.edges[i], 0.1 + i * (0.7 - 0.1) / 3);
}

TEST(Discretize, Errors) {
  const std::vector<double> constant{2.0, 2.0};
  EXPECT_THROW(discretize(constant, 2), Error);
  const std::vector<double> ok{1.0, 2.0};
  EXPECT_THROW(discretize(ok, 1), Error);
}

TEST(ReadNumeric, RejectsText) {
  testing::TempDir dir;
  EXPECT_EQ(read_numeric_series(write(dir, "n.csv", "t\n1.5\n-2\n")), (std::vector<double>{1.5, -2.0}));
  EXPECT_THROW(read_numeric_series(write(dir, "m.csv", "t\n1.5\nabc\n2\n")), Error);
}

}  // namespace
}  // namespace mtd
