#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>
#include <string>

#include "geod/libsvm.hpp"
#include "geod/synthetic.hpp"
#include "test_support.hpp"

namespace geod {
namespace {

SparseDataset parse(const std::string& text, const LibsvmOptions& opts = {}) {
  std::istringstream in(text);
  return parse_libsvm(in, opts);
}

std::string serialize(const SparseDataset& d) {
  std::ostringstream out;
  write_libsvm(out, d);
  return out.str();
}

Errc parse_error(const std::string& text) {
  try {
    (void)parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for: " << text;
  return Errc::io_error;
}

TEST(ParseLibsvm, TwoSampleExample) {
  const SparseDataset d = parse("+1 1:0.5 3:-1.2\n-1 2:2.0\n");
  ASSERT_EQ(d.n_samples(), 2u);
  EXPECT_EQ(d.n_features(), 3u);
  EXPECT_EQ(d.label(0), 1.0);
  EXPECT_EQ(d.label(1), -1.0);
  ASSERT_EQ(d.row(0).size(), 2u);
  EXPECT_EQ(d.row(0)[0], (Feature{1, 0.5}));
  EXPECT_EQ(d.row(0)[1], (Feature{3, -1.2}));
  ASSERT_EQ(d.row(1).size(), 1u);
  EXPECT_EQ(d.row(1)[0], (Feature{2, 2.0}));
}

TEST(ParseLibsvm, NonIncreasingIndicesReportLine) {
  try {
    (void)parse("1 2:1 1:1");
    FAIL();
  } catch (const MalformedLine& e) {
    EXPECT_EQ(e.line_no(), 1u);
    EXPECT_EQ(e.code(), Errc::malformed_line);
  }
  try {
    (void)parse("+1 1:1\n\n-1 3:1 3:2\n");
    FAIL();
  } catch (const MalformedLine& e) {
    EXPECT_EQ(e.line_no(), 3u);
  }
}

TEST(ParseLibsvm, MalformedTokens) {
  EXPECT_EQ(parse_error("+1 1:x\n"), Errc::malformed_line);
  EXPECT_EQ(parse_error("+1 12\n"), Errc::malformed_line);
  EXPECT_EQ(parse_error("abc 1:1\n"), Errc::malformed_line);
  EXPECT_EQ(parse_error("+1 0:1\n"), Errc::malformed_line);
  EXPECT_EQ(parse_error("+1 -2:1\n"), Errc::malformed_line);
  EXPECT_EQ(parse_error("+1 1:nan\n"), Errc::malformed_line);
  EXPECT_EQ(parse_error("+1 1:inf\n"), Errc::malformed_line);
  EXPECT_EQ(parse_error("+1 1:1e999\n"), Errc::malformed_line);
}

TEST(ParseLibsvm, LabelErrors) {
  EXPECT_EQ(parse_error("1 1:1\n2 1:1\n3 1:1\n"), Errc::too_many_classes);
  EXPECT_EQ(parse_error(""), Errc::empty_input);
  EXPECT_EQ(parse_error("\n  \n# only a comment\n"), Errc::empty_input);
}

TEST(ParseLibsvm, LabelConventions) {
  const SparseDataset zero_one = parse("0 1:1\n1 1:2\n0 2:1\n");
  EXPECT_EQ(zero_one.label(0), -1.0);
  EXPECT_EQ(zero_one.label(1), 1.0);
  EXPECT_EQ(zero_one.label(2), -1.0);

  const SparseDataset two_four = parse("4 1:1\n2 1:2\n");
  EXPECT_EQ(two_four.label(0), 1.0);
  EXPECT_EQ(two_four.label(1), -1.0);

  EXPECT_EQ(parse("-1 1:1\n").label(0), -1.0);
  EXPECT_EQ(parse("+1 1:1\n").label(0), 1.0);
}

TEST(ParseLibsvm, CommentsWhitespaceAndExponents) {
  const SparseDataset d = parse("# header\n+1\t1:1e-3  4:2E+2 # trailing\r\n\n-1 2:3\n");
  ASSERT_EQ(d.n_samples(), 2u);
  EXPECT_EQ(d.n_features(), 4u);
  EXPECT_EQ(d.row(0)[0].value, 1e-3);
  EXPECT_EQ(d.row(0)[1].value, 200.0);
  EXPECT_EQ(d.row(0)[1].index, 4u);
}

TEST(ParseLibsvm, EmptyRowAndMinFeatures) {
  const SparseDataset d = parse("+1\n-1 2:1\n", LibsvmOptions{10});
  EXPECT_EQ(d.n_features(), 10u);
  EXPECT_TRUE(d.row(0).empty());
  EXPECT_EQ(parse("+1 5:1\n", LibsvmOptions{2}).n_features(), 5u);
  EXPECT_EQ(parse("+1 5:1\n").with_min_features(8).n_features(), 8u);
  EXPECT_EQ(parse("+1 5:1\n").with_min_features(2).n_features(), 5u);
}

TEST(WriteLibsvm, RoundTripRandomDatasets) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const SparseDataset d = testing::random_dataset(rng);
    const SparseDataset back = parse(serialize(d), LibsvmOptions{d.n_features()});
    ASSERT_EQ(back, d) << "trial " << trial;
  }
}

TEST(WriteLibsvm, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "geod_dataio_roundtrip.svm";
  const SparseDataset d = synthetic_classification(20, 7, 2.0, 0.5, 3);
  save_libsvm(path.string(), d);
  EXPECT_EQ(load_libsvm(path.string(), LibsvmOptions{d.n_features()}), d);
  std::filesystem::remove(path);
  try {
    (void)load_libsvm((path.parent_path() / "geod_missing_dir" / "x.svm").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::io_error);
  }
}

TEST(ParseLibsvm, MutatedInputsNeverCrash) {
  std::mt19937_64 rng(7);
  int parsed = 0;
  int rejected = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::string text = testing::mutate_bytes(serialize(testing::random_dataset(rng)), rng);
    try {
      const SparseDataset d = parse(text);
      EXPECT_GE(d.n_samples(), 1u);
      ++parsed;
    } catch (const Error&) {
      ++rejected;
    }
  }
  EXPECT_GT(parsed, 0);
  EXPECT_GT(rejected, 0);
}

TEST(SyntheticClassification, Deterministic) {
  EXPECT_EQ(synthetic_classification(50, 10, 3.0, 0.4, 11),
            synthetic_classification(50, 10, 3.0, 0.4, 11));
  EXPECT_NE(synthetic_classification(50, 10, 3.0, 0.4, 11),
            synthetic_classification(50, 10, 3.0, 0.4, 12));
}

TEST(SyntheticClassification, ShapeAndBoundaries) {
  const SparseDataset one = synthetic_classification(1, 5, 1.0, 0.1, 0);
  EXPECT_EQ(one.n_samples(), 1u);
  EXPECT_EQ(one.n_features(), 5u);
  EXPECT_GE(one.row(0).size(), 1u);

  const SparseDataset dense = synthetic_classification(30, 4, 1.0, 1.0, 1);
  for (std::size_t i = 0; i < dense.n_samples(); ++i) EXPECT_EQ(dense.row(i).size(), 4u);

  EXPECT_THROW((void)synthetic_classification(0, 5, 1.0, 0.5, 0), Error);
  EXPECT_THROW((void)synthetic_classification(5, 0, 1.0, 0.5, 0), Error);
  EXPECT_THROW((void)synthetic_classification(5, 5, 1.0, 0.0, 0), Error);
  EXPECT_THROW((void)synthetic_classification(5, 5, 1.0, 1.5, 0), Error);
}

TEST(SparseDataset, ValidatesInvariants) {
  EXPECT_THROW(SparseDataset(3, {0}, {}, {}), Error);
  EXPECT_THROW(SparseDataset(3, {0, 1}, {{4, 1.0}}, {1.0}), Error);
  EXPECT_THROW(SparseDataset(3, {0, 2}, {{2, 1.0}, {2, 1.0}}, {1.0}), Error);
  EXPECT_THROW(SparseDataset(3, {0, 1}, {{1, 1.0}}, {0.5}), Error);
  EXPECT_NO_THROW(SparseDataset(3, {0, 1}, {{3, 1.0}}, {-1.0}));
}

}  // namespace
}  // namespace geod
