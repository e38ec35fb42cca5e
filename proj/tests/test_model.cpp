#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "slitsim/model.hpp"

namespace slitsim {
namespace {

using S = Spin;

TEST(InitRegister, AlternatingStartsWithSpin1) {
  const auto reg = init_register(ModelParams{});
  const std::vector<Spin> expected{S::Spin1, S::Spin2, S::Spin1, S::Spin2, S::Spin1,
                                   S::Spin2, S::Spin1, S::Spin2, S::Spin1, S::Spin2};
  EXPECT_EQ(reg.spins(), expected);
  EXPECT_EQ(reg.flip_counts(), std::vector<std::uint64_t>(10, 0));
}

TEST(InitRegister, UniformPatterns) {
  auto one = ModelParams::with_geometry(1.0, 1, SpinPattern::AllSpin2);
  EXPECT_EQ(init_register(one).spins(), std::vector<Spin>{S::Spin2});

  auto three = ModelParams::with_geometry(1.0, 3, SpinPattern::AllSpin1);
  const auto reg = init_register(three);
  EXPECT_EQ(reg.spins(), (std::vector<Spin>{S::Spin1, S::Spin1, S::Spin1}));
  EXPECT_EQ(reg.flip_counts(), (std::vector<std::uint64_t>{0, 0, 0}));
}

TEST(Flip, TogglesOneOrbit) {
  OrbitRegister single({S::Spin1}, {0});
  EXPECT_EQ(flip(single, 1).spins(), std::vector<Spin>{S::Spin2});

  OrbitRegister two({S::Spin1, S::Spin2}, {0, 0});
  const auto after = flip(two, 2);
  EXPECT_EQ(after.spins(), (std::vector<Spin>{S::Spin1, S::Spin1}));
  EXPECT_EQ(after.flip_count(1), 0u);
  EXPECT_EQ(after.flip_count(2), 1u);
}

TEST(Flip, TwiceRestores) {
  auto reg = init_register(ModelParams{});
  const Spin before = reg.spin(3);
  reg.flip(3);
  reg.flip(3);
  EXPECT_EQ(reg.spin(3), before);
  EXPECT_EQ(reg.flip_count(3), 2u);
  EXPECT_EQ(reg.total_flips(), 2u);
}

TEST(Flip, RejectsOutOfRange) {
  auto reg = init_register(ModelParams{});
  EXPECT_THROW(reg.flip(0), std::out_of_range);
  EXPECT_THROW(reg.flip(11), std::out_of_range);
  EXPECT_THROW(reg.spin(11), std::out_of_range);
}

TEST(Flip, SpinParityProperty) {
  auto params = ModelParams{};
  const auto initial = init_register(params);
  auto reg = initial;
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<std::size_t> pick(1, 10);
  for (int i = 0; i < 5000; ++i) reg.flip(pick(gen));
  for (std::size_t k = 1; k <= 10; ++k) {
    const Spin expected = reg.flip_count(k) % 2 == 0 ? initial.spin(k) : other(initial.spin(k));
    EXPECT_EQ(reg.spin(k), expected) << "orbit " << k;
  }
  EXPECT_EQ(reg.total_flips(), 5000u);
}

TEST(Spin, OtherIsInvolution) {
  EXPECT_EQ(other(S::Spin1), S::Spin2);
  EXPECT_EQ(other(S::Spin2), S::Spin1);
  EXPECT_EQ(other(other(S::Spin1)), S::Spin1);
}

TEST(NearestOrbit, Examples) {
  const ModelParams p;
  auto a = nearest_orbit(0.27, p);
  EXPECT_EQ(a.orbit, 3);
  EXPECT_NEAR(a.distance, 0.03, 1e-15);

  auto tie = nearest_orbit(0.25, p);
  EXPECT_EQ(tie.orbit, 2);
  EXPECT_NEAR(tie.distance, 0.05, 1e-15);

  auto centre = nearest_orbit(0.0, p);
  EXPECT_EQ(centre.orbit, 1);
  EXPECT_DOUBLE_EQ(centre.distance, 0.1);
}

TEST(NearestOrbit, BeyondRadiusUsesOutermost) {
  auto r = nearest_orbit(1.3, ModelParams{});
  EXPECT_EQ(r.orbit, 10);
  EXPECT_NEAR(r.distance, 0.3, 1e-15);
  EXPECT_THROW(nearest_orbit(-0.1, ModelParams{}), DomainError);
}

TEST(NearestOrbit, ExactOrbitRadii) {
  for (int n : {1, 3, 7, 10, 25}) {
    auto p = ModelParams::with_geometry(2.5, n);
    for (int k = 1; k <= n; ++k) {
      auto r = nearest_orbit(p.orbit_radius(k), p);
      EXPECT_EQ(r.orbit, k);
      EXPECT_EQ(r.distance, 0.0);
    }
  }
}

TEST(NearestOrbit, MatchesLinearScan) {
  std::mt19937_64 gen(11);
  for (int n : {1, 2, 10, 33}) {
    auto p = ModelParams::with_geometry(1.7, n);
    std::uniform_real_distribution<double> u(0.0, p.atom_radius);
    for (int i = 0; i < 5000; ++i) {
      const double rho = u(gen);
      const auto got = nearest_orbit(rho, p);
      const auto want = testing::scan_nearest_orbit(rho, p.atom_radius, n);
      EXPECT_EQ(got.orbit, want.orbit) << "rho=" << rho << " n=" << n;
      EXPECT_DOUBLE_EQ(got.distance, want.distance);
      // Outside the innermost gap, no point is further than half a spacing.
      if (rho >= p.orbit_spacing() / 2)
        EXPECT_LE(got.distance, p.orbit_spacing() / 2 + 1e-15);
    }
  }
}

TEST(ModelParams, Validation) {
  EXPECT_NO_THROW(ModelParams{}.validate());
  EXPECT_DOUBLE_EQ(ModelParams{}.orbit_spacing() * 10, 1.0);
  EXPECT_EQ(ModelParams{}.orbit_radius(10), 1.0);

  auto bad = ModelParams{};
  bad.atom_radius = 0.0;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = ModelParams{};
  bad.n_orbits = 0;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = ModelParams{};
  bad.slit2.upper_closed = true;  // both slits now own 0
  EXPECT_THROW(bad.validate(), DomainError);
  bad = ModelParams{};
  bad.slit1.upper = 1.5;
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(Aperture, PartitionOfEmissionSegment) {
  const ModelParams p;
  for (double y : {-1.0, -0.5, -1e-300, 0.0, 1e-300, 0.5, 1.0}) {
    const int owners = int(p.slit1.contains(y)) + int(p.slit2.contains(y));
    EXPECT_EQ(owners, 1) << y;
  }
  EXPECT_TRUE(p.slit1.contains(0.0));
}

TEST(Histogram, BinsAndSum) {
  Histogram a, b;
  a.at_bin(-90) = 3;
  a.at_bin(89) = 1;
  b.at_bin(0) = 2;
  const auto s = a + b;
  EXPECT_EQ(s.total(), 6u);
  EXPECT_EQ(s.at_bin(0), 2u);
  EXPECT_THROW(a.at_bin(90), std::out_of_range);
  EXPECT_THROW(a.at_bin(-91), std::out_of_range);
}

}  // namespace
}  // namespace slitsim
