#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "vbdiag/constellation.hpp"
#include "vbdiag/errors.hpp"

using namespace vbdiag;

namespace {

constexpr double kDeg = M_PI / 180.0;

Skyplot six_satellites() {
  Skyplot s;
  s.faulty_id = {Constellation::gps, 8};
  s.satellites = {{{Constellation::gps, 8}, 40.0, 35.0},  {{Constellation::gps, 3}, 120.0, 60.0},
                  {{Constellation::gps, 11}, 200.0, 20.0}, {{Constellation::gps, 17}, 290.0, 45.0},
                  {{Constellation::gps, 22}, 0.0, 85.0},   {{Constellation::gps, 30}, 330.0, 12.0}};
  return s;
}

}  // namespace

TEST(SatelliteId, FormatAndParse) {
  EXPECT_EQ((SatelliteId{Constellation::gps, 8}).to_string(), "G08");
  EXPECT_EQ((SatelliteId{Constellation::galileo, 23}).to_string(), "E23");
  EXPECT_EQ(SatelliteId::parse("g8"), (SatelliteId{Constellation::gps, 8}));
  EXPECT_EQ(SatelliteId::parse("E23"), (SatelliteId{Constellation::galileo, 23}));
  EXPECT_THROW(SatelliteId::parse("X1"), InputError);
}

TEST(Skyplot, ParseDropsMaskedAndKeepsOrder) {
  std::istringstream in("# header\n\nGPS,8,10,40\nGALILEO,3,100,4.0\nGALILEO,4,200,30\n");
  auto sky = parse_skyplot(in, SatelliteId::parse("G08"), 5.0);
  ASSERT_EQ(sky.size(), 2u);
  EXPECT_EQ(sky.satellites[1].id.to_string(), "E04");
  EXPECT_TRUE(sky.dual_constellation());
  EXPECT_EQ(sky.parameter_count(), 5u);
  EXPECT_EQ(sky.constellation_label(), "GPS+GALILEO");
}

TEST(Skyplot, ParseErrorCarriesLine) {
  std::istringstream in("GPS,8,10,40\nGPS,9,abc,40\n");
  try {
    parse_skyplot(in, SatelliteId::parse("G08"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Skyplot, Builtins) {
  for (const char* name : {"gps24", "dual54"}) {
    ASSERT_TRUE(is_builtin_skyplot(name));
    auto sky = resolve_skyplot(name, SatelliteId::parse("G08"));
    EXPECT_NO_THROW(validate_skyplot(sky));
    EXPECT_NO_THROW(sky.index_of(sky.faulty_id));
  }
  EXPECT_FALSE(resolve_skyplot("gps24", SatelliteId::parse("G08")).dual_constellation());
  EXPECT_TRUE(resolve_skyplot("dual54", SatelliteId::parse("G08")).dual_constellation());
}

TEST(Skyplot, ValidateRejectsUnderdetermined) {
  auto sky = six_satellites();
  sky.satellites.resize(3);
  try {
    validate_skyplot(sky);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_NE(std::string(e.what()).find("under-determined geometry"), std::string::npos);
  }
  auto missing = six_satellites();
  missing.faulty_id = SatelliteId::parse("G99");
  EXPECT_THROW(validate_skyplot(missing), GeometryError);
}

TEST(GeometryMatrix, LineOfSightConventions) {
  Skyplot s;
  s.faulty_id = SatelliteId::parse("G01");
  s.satellites = {{SatelliteId::parse("G01"), 123.0, 90.0},
                  {SatelliteId::parse("G02"), 0.0, 0.0},
                  {SatelliteId::parse("G03"), 90.0, 30.0},
                  {SatelliteId::parse("G04"), 200.0, 30.0}};
  const auto g = geometry_matrix(s);
  EXPECT_NEAR(g(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(g(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(g(0, 2), -1.0, 1e-15);
  EXPECT_NEAR(g(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(g(1, 1), -1.0, 1e-15);
  EXPECT_NEAR(g(1, 2), 0.0, 1e-15);
  EXPECT_EQ(g(0, 3), 1.0);
}

TEST(GeometryMatrix, HandComputed) {
  const auto sky = six_satellites();
  const auto g = geometry_matrix(sky);
  ASSERT_EQ(g.rows(), 6);
  ASSERT_EQ(g.cols(), 4);
  for (std::size_t i = 0; i < sky.size(); ++i) {
    const double az = sky.satellites[i].azimuth_deg * kDeg, el = sky.satellites[i].elevation_deg * kDeg;
    const auto r = static_cast<Eigen::Index>(i);
    EXPECT_NEAR(g(r, 0), -std::cos(el) * std::sin(az), 1e-12);
    EXPECT_NEAR(g(r, 1), -std::cos(el) * std::cos(az), 1e-12);
    EXPECT_NEAR(g(r, 2), -std::sin(el), 1e-12);
    EXPECT_EQ(g(r, 3), 1.0);
  }
}

TEST(GeometryMatrix, DualAddsGalileoClock) {
  auto sky = six_satellites();
  sky.satellites[4].id = SatelliteId::parse("E04");
  sky.satellites[5].id = SatelliteId::parse("E05");
  const auto g = geometry_matrix(sky);
  ASSERT_EQ(g.cols(), 5);
  for (Eigen::Index i = 0; i < 6; ++i) EXPECT_EQ(g(i, 4), i >= 4 ? 1.0 : 0.0);
}

TEST(SolutionMatrix, MatchesNormalEquations) {
  const auto sky = six_satellites();
  const auto g = geometry_matrix(sky);
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(6);
  const auto s = solution_matrix(g, w);
  const auto oracle = test::brute_force_solution(g, w);
  EXPECT_LT((s.full - oracle).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((s.full * g - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((s.enu - oracle.topRows(3)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(SolutionMatrix, SingularThrows) {
  Skyplot s;
  s.faulty_id = SatelliteId::parse("G01");
  for (int i = 1; i <= 5; ++i) s.satellites.push_back({{Constellation::gps, i}, 45.0, 30.0});
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(5);
  EXPECT_THROW(solution_matrix(geometry_matrix(s), w), GeometryError);
}

TEST(TrackFrame, Conventions) {
  const auto t0 = enu_to_track({0.0});
  EXPECT_NEAR((t0.row(0) - Eigen::RowVector3d(0, 1, 0)).norm(), 0.0, 1e-15);
  const auto t90 = enu_to_track({90.0});
  EXPECT_NEAR((t90.row(0) - Eigen::RowVector3d(1, 0, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((t90.row(2) - Eigen::RowVector3d(0, 0, 1)).norm(), 0.0, 1e-15);
  for (double h : {0.0, 33.0, 200.0}) {
    const auto r = enu_to_track({h});
    EXPECT_LT((r * r.transpose() - Eigen::Matrix3d::Identity()).norm(), 1e-14);
  }
}

TEST(PositionError, ZeroAndLinear) {
  const auto sky = six_satellites();
  const auto s = solution_matrix(geometry_matrix(sky), Eigen::VectorXd::Ones(6));
  const TrackFrame frame{0.0};
  EXPECT_EQ(position_error(s, frame, Eigen::VectorXd::Zero(6)).norm(), 0.0);

  const auto oracle = test::brute_force_solution(geometry_matrix(sky), Eigen::VectorXd::Ones(6));
  Eigen::VectorXd bias = Eigen::VectorXd::Zero(6);
  bias(0) = 10.0;
  const Eigen::Vector3d expected = enu_to_track(frame) * oracle.topRows(3).col(0) * 10.0;
  EXPECT_LT((position_error(s, frame, bias) - expected).norm(), 1e-9);

  Eigen::VectorXd a = Eigen::VectorXd::LinSpaced(6, -1.0, 2.0), b = Eigen::VectorXd::Constant(6, 0.3);
  const auto lhs = position_error(s, frame, 2.0 * a + b);
  const auto rhs = 2.0 * position_error(s, frame, a) + position_error(s, frame, b);
  EXPECT_LT((lhs - rhs).norm(), 1e-12);
}

TEST(PositionError, CommonClockBiasIsAbsorbed) {
  const auto sky = six_satellites();
  const auto s = solution_matrix(geometry_matrix(sky), Eigen::VectorXd::LinSpaced(6, 0.5, 2.0));
  EXPECT_LT(position_error(s, {17.0}, Eigen::VectorXd::Constant(6, 42.0)).norm(), 1e-9);
}

TEST(PositionError, RotationPreservesNorm) {
  const auto sky = six_satellites();
  const auto s = solution_matrix(geometry_matrix(sky), Eigen::VectorXd::Ones(6));
  Eigen::VectorXd e = Eigen::VectorXd::LinSpaced(6, -3.0, 4.0);
  const double ref = position_error(s, {0.0}, e).norm();
  for (double h = 0.0; h < 360.0; h += 15.0) EXPECT_NEAR(position_error(s, {h}, e).norm(), ref, 1e-12);
}

TEST(SolutionMatrix, RandomSkyplots) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> az(0.0, 360.0), el(6.0, 89.0);
  std::uniform_int_distribution<int> count(6, 16);
  for (int trial = 0; trial < 100; ++trial) {
    Skyplot sky;
    const int n = count(rng);
    const bool dual = trial % 2 == 1;
    for (int i = 0; i < n; ++i) {
      const auto c = dual && i >= 3 && i % 2 ? Constellation::galileo : Constellation::gps;
      sky.satellites.push_back({{c, i + 1}, az(rng), el(rng)});
    }
    sky.faulty_id = sky.satellites[0].id;
    const auto g = geometry_matrix(sky);
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w(i) = 1.0 / (0.5 + sky.satellites[static_cast<std::size_t>(i)].elevation_deg / 30.0);
    const auto s = solution_matrix(g, w);
    const auto p = static_cast<Eigen::Index>(sky.parameter_count());
    EXPECT_LT((s.full * g - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff(), 1e-10) << trial;
    const auto oracle = test::brute_force_solution(g, w);
    Eigen::VectorXd bias = Eigen::VectorXd::Zero(n);
    bias(0) = 1.0;
    EXPECT_LT((s.enu * bias - oracle.topRows(3).col(0)).cwiseAbs().maxCoeff(), 1e-9) << trial;
  }
}

TEST(SolutionMatrix, AddingSatelliteDoesNotInflateCovariance) {
  auto sky = six_satellites();
  const auto base = solution_matrix(geometry_matrix(sky), Eigen::VectorXd::Ones(6));
  sky.satellites.push_back({SatelliteId::parse("G31"), 250.0, 70.0});
  const auto more = solution_matrix(geometry_matrix(sky), Eigen::VectorXd::Ones(7));
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_LE(more.covariance(i, i), base.covariance(i, i) + 1e-12);
}
