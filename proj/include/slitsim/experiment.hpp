#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "slitsim/dynamics.hpp"
#include "slitsim/model.hpp"

namespace slitsim {

/// SplitMix64 step; used only to derive stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Two independent mt19937_64 streams: emission ordinates and scattering
/// signs. The engine is fully specified by the C++ standard; conversions to
/// reals and signs are done here so output does not depend on the standard
/// library's distribution implementations.
class RngStreams {
 public:
  static constexpr const char* kIdentity =
      "mt19937_64 x2; seeds = splitmix64(seed) outputs #1 (position) and #2 (sign); "
      "uniform = (u >> 11) * 2^-53; sign = msb(u) ? -1 : +1";

  explicit RngStreams(std::uint64_t seed) : seed_(seed) {
    std::uint64_t state = seed;
    position_.seed(splitmix64(state));
    sign_.seed(splitmix64(state));
  }

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(position_() >> 11) * 0x1.0p-53;
  }

  Sign sign() noexcept { return (sign_() >> 63) != 0 ? Sign::Minus : Sign::Plus; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 position_;
  std::mt19937_64 sign_;
};

struct Emission {
  double ordinate = 0.0;
  std::optional<SlitTag> slit;  // empty when the particle hits a closed slit
};

/// Slit an ordinate would pass through, ignoring which slits are open.
/// The centre point falls to slit 1 if no aperture claims it.
inline std::optional<SlitTag> classify(double ordinate, const ModelParams& params) noexcept {
  if (params.slit1.contains(ordinate)) return SlitTag::Slit1;
  if (params.slit2.contains(ordinate)) return SlitTag::Slit2;
  if (ordinate == 0.0) return SlitTag::Slit1;
  return std::nullopt;
}

/// Gates a drawn ordinate through the slits open in `context`.
inline Emission gate(double ordinate, ExperimentContext context,
                     const ModelParams& params) noexcept {
  auto tag = classify(ordinate, params);
  if (tag && !slit_open(context, *tag)) tag.reset();
  return {ordinate, tag};
}

/// Draws one emission ordinate. For SequentialHalves, phase 1 feeds slit 1's
/// aperture and phase 2 slit 2's; other contexts draw on [-R, R].
inline Emission emit(RngStreams& rng, ExperimentContext context, int phase,
                     const ModelParams& params) {
  const double u = rng.uniform();
  if (context == ExperimentContext::SequentialHalves) {
    if (phase != 1 && phase != 2) throw DomainError("emit: phase must be 1 or 2");
    const SlitTag tag = phase == 1 ? SlitTag::Slit1 : SlitTag::Slit2;
    const Aperture& a = phase == 1 ? params.slit1 : params.slit2;
    double y = a.lower + u * a.width();
    // u < 1 keeps y below upper; an open lower end needs a nudge off the edge.
    if (!a.contains(y)) y = a.upper_closed ? a.upper : std::midpoint(a.lower, a.upper);
    return {y, tag};
  }
  const double r = params.atom_radius;
  return gate(-r + 2.0 * r * u, context, params);
}

/// Number of phase-1 particles in a SequentialHalves run of n particles.
constexpr std::uint64_t first_half(std::uint64_t n) noexcept { return n - n / 2; }

struct NoObserver {
  void operator()(const ParticleRecord&) const noexcept {}
};

/// Runs n_particles emissions in order through one shared orbit register.
/// The observer sees every particle, blocked ones included.
template <class Observer = NoObserver>
RunRecord run(const ModelParams& params, ExperimentContext context,
              std::uint64_t n_particles, std::uint64_t seed,
              Observer&& observer = {}, const SolverSettings& settings = {}) {
  params.validate();
  if (n_particles < 1) throw DomainError("run: n_particles must be >= 1");

  RunRecord rec;
  rec.params = params;
  rec.context = context;
  rec.seed = seed;
  rec.prng = RngStreams::kIdentity;
  rec.final_register = init_register(params);

  RngStreams rng(seed);
  const std::uint64_t phase_one = first_half(n_particles);
  for (std::uint64_t i = 0; i < n_particles; ++i) {
    const int phase = i < phase_one ? 1 : 2;
    const Emission e = emit(rng, context, phase, params);
    const Sign sign = rng.sign();
    ++rec.n_emitted;

    ParticleRecord p;
    p.emission_ordinate = e.ordinate;
    p.slit = e.slit;
    p.scatter_sign = sign;
    if (!e.slit) {
      ++rec.n_blocked;
      observer(std::as_const(p));
      continue;
    }

    const InterferenceOutcome io =
        apply_interference(e.ordinate, *e.slit, rec.final_register, params, settings);
    p.displaced = io.displaced;
    p.nearest_orbit = io.orbit;
    p.displacement_before = io.distance_before;
    p.displacement_after = io.distance_after;
    p.final_ordinate = io.ordinate;
    p.angle = scatter(io.ordinate, sign, params);
    p.screen_bin = register_on_screen(*p.angle);

    ++rec.n_registered;
    if (io.displaced) ++rec.n_displaced;
    (*e.slit == SlitTag::Slit1 ? rec.slit1 : rec.slit2).at_bin(*p.screen_bin) += 1;
    rec.total.at_bin(*p.screen_bin) += 1;
    observer(std::as_const(p));
  }
  return rec;
}

/// Re-executes the run described by `record` and compares every counter,
/// histogram bin and the final register bit-exactly.
inline bool replay_check(const RunRecord& record) {
  if (record.n_emitted < 1) return false;
  RunRecord again;
  try {
    again = run(record.params, record.context, record.n_emitted, record.seed);
  } catch (const std::exception&) {
    return false;
  }
  return again == record;
}

}  // namespace slitsim
