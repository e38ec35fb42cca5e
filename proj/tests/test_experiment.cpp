#include <gtest/gtest.h>

#include <vector>

#include "slitsim/experiment.hpp"

namespace slitsim {
namespace {

using Ctx = ExperimentContext;

TEST(Gate, ContextRules) {
  const ModelParams p;
  EXPECT_FALSE(gate(-0.4, Ctx::S1Only, p).slit.has_value());
  EXPECT_EQ(gate(0.4, Ctx::S1Only, p).slit, SlitTag::Slit1);
  EXPECT_EQ(gate(0.0, Ctx::BothRandom, p).slit, SlitTag::Slit1);
  EXPECT_FALSE(gate(0.3, Ctx::S2Only, p).slit.has_value());
  EXPECT_EQ(gate(-0.3, Ctx::S2Only, p).slit, SlitTag::Slit2);
}

TEST(Gate, CentreFallsToSlit1EvenWithOpenApertures) {
  ModelParams p;
  p.slit1.lower_closed = false;  // (0, R]
  EXPECT_EQ(classify(0.0, p), SlitTag::Slit1);
}

TEST(Gate, GapBetweenCustomAperturesIsBlocked) {
  ModelParams p;
  p.slit1 = {0.2, 1.0, true, true};
  p.slit2 = {-1.0, -0.2, true, true};
  p.validate();
  EXPECT_FALSE(gate(0.1, Ctx::BothRandom, p).slit.has_value());
  EXPECT_EQ(gate(0.25, Ctx::BothRandom, p).slit, SlitTag::Slit1);
}

TEST(Emit, SequentialPhasesStayInApertures) {
  const ModelParams p;
  RngStreams rng(1);
  for (int i = 0; i < 10000; ++i) {
    const auto e1 = emit(rng, Ctx::SequentialHalves, 1, p);
    ASSERT_EQ(e1.slit, SlitTag::Slit1);
    ASSERT_TRUE(p.slit1.contains(e1.ordinate));
    const auto e2 = emit(rng, Ctx::SequentialHalves, 2, p);
    ASSERT_EQ(e2.slit, SlitTag::Slit2);
    ASSERT_TRUE(p.slit2.contains(e2.ordinate));
  }
  EXPECT_THROW(emit(rng, Ctx::SequentialHalves, 3, p), DomainError);
}

TEST(Emit, UniformOverSegment) {
  const ModelParams p;
  RngStreams rng(2);
  int upper = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto e = emit(rng, Ctx::BothRandom, 1, p);
    ASSERT_GE(e.ordinate, -1.0);
    ASSERT_LT(e.ordinate, 1.0);
    upper += e.slit == SlitTag::Slit1;
  }
  EXPECT_NEAR(static_cast<double>(upper) / n, 0.5, 0.01);
}

TEST(RngStreams, DeterministicAndIndependent) {
  RngStreams a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double ua = a.uniform();
    EXPECT_EQ(ua, b.uniform());
    EXPECT_EQ(a.sign(), b.sign());
    (void)c;
  }
  // Sign stream is untouched by position draws.
  RngStreams x(9), y(9);
  for (int i = 0; i < 50; ++i) x.uniform();
  for (int i = 0; i < 20; ++i) EXPECT_EQ(x.sign(), y.sign());
}

TEST(RngStreams, PinnedFirstDraws) {
  // Guards the documented generator identity against silent changes.
  std::uint64_t state = 42;
  const std::uint64_t pos_seed = splitmix64(state);
  const std::uint64_t sign_seed = splitmix64(state);
  std::mt19937_64 pos(pos_seed), sgn(sign_seed);
  RngStreams rng(42);
  EXPECT_EQ(rng.uniform(), static_cast<double>(pos() >> 11) * 0x1.0p-53);
  EXPECT_EQ(rng.sign(), (sgn() >> 63) ? Sign::Minus : Sign::Plus);
  std::uint64_t s0 = 0;
  EXPECT_EQ(splitmix64(s0), 0xE220A8397B1DCDAFULL);
}

TEST(Run, CountersAndAdditivity) {
  for (auto ctx : {Ctx::S1Only, Ctx::S2Only, Ctx::BothRandom, Ctx::SequentialHalves}) {
    const auto r = run(ModelParams{}, ctx, 20000, 5);
    EXPECT_EQ(r.n_emitted, 20000u);
    EXPECT_EQ(r.n_emitted, r.n_blocked + r.n_registered);
    EXPECT_EQ(r.n_registered, r.total.total());
    EXPECT_LE(r.n_displaced, r.n_registered);
    EXPECT_EQ(r.slit1 + r.slit2, r.total);
    EXPECT_EQ(r.n_displaced, r.final_register.total_flips());
  }
}

TEST(Run, SingleSlitContextsBlockTheOtherHalf) {
  const auto s1 = run(ModelParams{}, Ctx::S1Only, 20000, 8);
  EXPECT_EQ(s1.slit2.total(), 0u);
  EXPECT_NEAR(static_cast<double>(s1.n_blocked) / 20000, 0.5, 0.02);
  const auto s2 = run(ModelParams{}, Ctx::S2Only, 20000, 8);
  EXPECT_EQ(s2.slit1.total(), 0u);
  const auto seq = run(ModelParams{}, Ctx::SequentialHalves, 20001, 8);
  EXPECT_EQ(seq.n_blocked, 0u);
  EXPECT_EQ(seq.slit1.total(), 10001u);
  EXPECT_EQ(seq.slit2.total(), 10000u);
}

TEST(Run, StructuralDisplacementBounds) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    for (auto pattern : {SpinPattern::Alternating, SpinPattern::AllSpin1, SpinPattern::AllSpin2}) {
      const auto p = ModelParams::with_geometry(1.0, 10, pattern);
      EXPECT_LE(run(p, Ctx::S1Only, 100000, seed).n_displaced, 10u);
      EXPECT_LE(run(p, Ctx::S2Only, 100000, seed).n_displaced, 10u);
      EXPECT_LE(run(p, Ctx::SequentialHalves, 100000, seed).n_displaced, 20u);
    }
  }
}

TEST(Run, BothSlitsDisplaceAboutHalf) {
  const auto r = run(ModelParams{}, Ctx::BothRandom, 100000, 42);
  EXPECT_GE(r.displaced_fraction(), 0.49);
  EXPECT_LE(r.displaced_fraction(), 0.51);
}

TEST(Run, MatchIffDisplaceByReplayingTheRegister) {
  const ModelParams p;
  auto shadow = init_register(p);
  std::uint64_t seen = 0;
  const auto rec = run(p, Ctx::BothRandom, 20000, 17, [&](const ParticleRecord& pr) {
    ++seen;
    if (pr.blocked()) {
      EXPECT_FALSE(pr.angle.has_value());
      EXPECT_FALSE(pr.screen_bin.has_value());
      return;
    }
    const auto k = static_cast<std::size_t>(pr.nearest_orbit);
    EXPECT_EQ(pr.displaced, same_name(shadow.spin(k), *pr.slit));
    if (pr.displaced) {
      shadow.flip(k);
      EXPECT_LE(pr.displacement_after, pr.displacement_before);
    }
    EXPECT_EQ(*pr.angle, scatter(pr.final_ordinate, pr.scatter_sign, p));
  });
  EXPECT_EQ(seen, 20000u);
  EXPECT_EQ(shadow, rec.final_register);
}

TEST(Run, RejectsZeroParticles) {
  EXPECT_THROW(run(ModelParams{}, Ctx::BothRandom, 0, 1), DomainError);
}

TEST(Run, SignStreamSharedAcrossContexts) {
  // Blocked particles still consume a sign, so the slit-1 particles of S1Only
  // and BothRandom see the same ordinates and signs.
  std::vector<std::pair<double, Sign>> a, b;
  run(ModelParams{}, Ctx::S1Only, 2000, 3, [&](const ParticleRecord& r) {
    if (r.slit) a.emplace_back(r.emission_ordinate, r.scatter_sign);
  });
  run(ModelParams{}, Ctx::BothRandom, 2000, 3, [&](const ParticleRecord& r) {
    if (r.slit == SlitTag::Slit1) b.emplace_back(r.emission_ordinate, r.scatter_sign);
  });
  EXPECT_EQ(a, b);
}

TEST(ReplayCheck, DetectsChanges) {
  auto rec = run(ModelParams{}, Ctx::BothRandom, 5000, 42);
  EXPECT_TRUE(replay_check(rec));

  auto perturbed = rec;
  perturbed.total.at_bin(10) += 1;
  EXPECT_FALSE(replay_check(perturbed));

  auto other_seed = rec;
  other_seed.seed += 1;
  EXPECT_FALSE(replay_check(other_seed));
}

}  // namespace
}  // namespace slitsim
