#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "ghhj/io.hpp"

namespace {

using namespace ghhj;
namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ghhj_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& body) const {
    std::ofstream(path(name)) << body;
  }

  fs::path dir_;
};

TEST_F(IoTest, SpaceRoundTripIsExact) {
  const auto s = make_circle(7);
  io::write_space(path("c.txt"), s);
  const auto back = io::read_space(path("c.txt"));
  ASSERT_EQ(back.size(), 7u);
  for (Index i = 0; i < 7; ++i) {
    for (Index j = 0; j < 7; ++j) EXPECT_EQ(back(i, j), s(i, j));
  }
}

TEST_F(IoTest, LabelsAreRead) {
  write("l.txt", "metric-space v1 2\n0 1\n1 0\n# label 0 left end\n# label 1 right\n");
  const auto s = io::read_space(path("l.txt"));
  EXPECT_EQ(s.labels(), (std::vector<std::string>{"left end", "right"}));
}

TEST_F(IoTest, MalformedFilesAreInputErrors) {
  write("h.txt", "metric-space v2 2\n0 1\n1 0\n");
  EXPECT_THROW(io::read_space(path("h.txt")), InputError);
  write("n.txt", "metric-space v1 2\n0 x\n1 0\n");
  EXPECT_THROW(io::read_space(path("n.txt")), InputError);
  write("s.txt", "metric-space v1 2\n0 1\n1\n");
  EXPECT_THROW(io::read_space(path("s.txt")), InputError);
  write("t.txt", "metric-space v1 2\n0 1\n1 0\ngarbage\n");
  EXPECT_THROW(io::read_space(path("t.txt")), InputError);
  EXPECT_THROW(io::read_space(path("missing.txt")), InputError);
}

TEST_F(IoTest, InvalidMetricIsRejectedOnRead) {
  write("a.txt", "metric-space v1 2\n0 1\n2 0\n");
  EXPECT_THROW(io::read_space(path("a.txt")), InputError);
  EXPECT_NO_THROW(io::read_matrix(path("a.txt")));
}

TEST_F(IoTest, GraphRoundTrip) {
  const GraphSpec g{3, {{0, 1, 0.5}, {1, 2, 0.25}}};
  io::write_graph(path("g.txt"), g);
  const auto back = io::read_graph(path("g.txt"));
  EXPECT_EQ(back.n_vertices, 3u);
  ASSERT_EQ(back.edges.size(), 2u);
  EXPECT_EQ(back.edges[1].weight, 0.25);
  EXPECT_EQ(apsp_from_graph(back)(0, 2), 0.75);
}

TEST_F(IoTest, MapPotentialMeasureRoundTrips) {
  auto a = make_space(make_circle(4));
  auto b = make_space(make_circle(8));
  const MetricMap f(a, b, {0, 2, 4, 6});
  io::write_map(path("m.txt"), f);
  EXPECT_EQ(io::read_map(path("m.txt"), a, b).assign(), f.assign());

  const Potential p(a, {0.1, -2.5, 1e-300, 3.0 / 7.0});
  io::write_potential(path("p.txt"), p);
  EXPECT_EQ(io::read_potential(path("p.txt"), a).values(), p.values());

  const Measure mu(a, {0.1, 0.2, 0.3, 0.4});
  io::write_measure(path("mu.txt"), mu);
  EXPECT_EQ(io::read_measure(path("mu.txt"), a).weights(), mu.weights());
}

TEST_F(IoTest, SizeMismatchesAreRejected) {
  auto a = make_space(make_circle(4));
  write("p.txt", "potential v1 3\n1\n2\n3\n");
  EXPECT_THROW(io::read_potential(path("p.txt"), a), InputError);
  write("m.txt", "metric-map v1 4\n0\n1\n2\n9\n");
  EXPECT_THROW(io::read_map(path("m.txt"), a, a), InputError);
  write("mu.txt", "measure v1 4\n0.5\n0.5\n0.5\n0\n");
  EXPECT_THROW(io::read_measure(path("mu.txt"), a), InputError);
}

TEST_F(IoTest, PlanIsWrittenDense) {
  auto s = make_space(make_interval(2, 1.0));
  const auto r = w2_exact(Measure::delta(s, 0), Measure::delta(s, 1));
  io::write_plan(path("plan.txt"), r.plan);
  std::ifstream in(path("plan.txt"));
  std::string header, row0, row1;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  EXPECT_EQ(header, "transport-plan v1 2");
  EXPECT_EQ(row0, "0 1");
  EXPECT_EQ(row1, "0 0");
}

}  // namespace
