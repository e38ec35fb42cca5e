#pragma once

// Domain types of the contextual two-slit model: atom geometry, slit
// apertures, the orbit spin register and the angular histograms.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slitsim/errors.hpp"

namespace slitsim {

enum class Spin : std::uint8_t { Spin1 = 1, Spin2 = 2 };

constexpr Spin other(Spin s) noexcept {
  return s == Spin::Spin1 ? Spin::Spin2 : Spin::Spin1;
}

enum class SlitTag : std::uint8_t { Slit1 = 1, Slit2 = 2 };

/// A slit and an orbit spin carry the same two names.
constexpr bool same_name(Spin s, SlitTag t) noexcept {
  return static_cast<std::uint8_t>(s) == static_cast<std::uint8_t>(t);
}

enum class SpinPattern : std::uint8_t { Alternating, AllSpin1, AllSpin2 };

enum class ExperimentContext : std::uint8_t {
  S1Only,
  S2Only,
  BothRandom,
  SequentialHalves
};

constexpr bool slit_open(ExperimentContext c, SlitTag t) noexcept {
  switch (c) {
    case ExperimentContext::S1Only:
      return t == SlitTag::Slit1;
    case ExperimentContext::S2Only:
      return t == SlitTag::Slit2;
    default:
      return true;
  }
}

/// Vertical interval with explicit end-point closedness.
struct Aperture {
  double lower = 0.0;
  double upper = 0.0;
  bool lower_closed = true;
  bool upper_closed = true;

  bool contains(double y) const noexcept {
    const bool above = lower_closed ? y >= lower : y > lower;
    const bool below = upper_closed ? y <= upper : y < upper;
    return above && below;
  }
  double width() const noexcept { return upper - lower; }

  friend bool operator==(const Aperture&, const Aperture&) = default;
};

inline constexpr int kScreenBins = 180;
inline constexpr int kFirstBin = -90;
inline constexpr int kLastBin = 89;

struct ModelParams {
  double atom_radius = 1.0;
  int n_orbits = 10;
  // Slit 1 owns the upper half including the centre point, slit 2 the lower.
  Aperture slit1{0.0, 1.0, true, true};
  Aperture slit2{-1.0, 0.0, true, false};
  SpinPattern initial_spins = SpinPattern::Alternating;

  /// Default apertures rescaled to the given radius.
  static ModelParams with_geometry(double radius, int orbits,
                                   SpinPattern spins = SpinPattern::Alternating) {
    ModelParams p;
    p.atom_radius = radius;
    p.n_orbits = orbits;
    p.slit1 = {0.0, radius, true, true};
    p.slit2 = {-radius, 0.0, true, false};
    p.initial_spins = spins;
    return p;
  }

  double orbit_spacing() const noexcept { return atom_radius / n_orbits; }

  /// Radius of orbit k, 1-based. r_n equals atom_radius exactly.
  double orbit_radius(int k) const noexcept {
    return atom_radius * static_cast<double>(k) / static_cast<double>(n_orbits);
  }

  void validate() const {
    if (!(atom_radius > 0.0) || !std::isfinite(atom_radius))
      throw DomainError("atom_radius must be positive and finite");
    if (n_orbits < 1) throw DomainError("n_orbits must be at least 1");
    for (const Aperture* a : {&slit1, &slit2}) {
      if (!(a->lower <= a->upper) || !std::isfinite(a->lower) ||
          !std::isfinite(a->upper))
        throw DomainError("slit aperture bounds must be finite and ordered");
      if (a->lower < -atom_radius || a->upper > atom_radius)
        throw DomainError("slit aperture must lie within [-R, R]");
    }
    const Aperture& lo = slit1.lower <= slit2.lower ? slit1 : slit2;
    const Aperture& hi = &lo == &slit1 ? slit2 : slit1;
    const bool touch = lo.upper == hi.lower && lo.upper_closed && hi.lower_closed;
    if (lo.upper > hi.lower || touch)
      throw DomainError("slit apertures must be disjoint");
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Per-orbit spins with toggle history. Orbits are indexed 1..n.
class OrbitRegister {
 public:
  OrbitRegister() = default;
  OrbitRegister(std::vector<Spin> spins, std::vector<std::uint64_t> flips)
      : spins_(std::move(spins)), flips_(std::move(flips)) {
    if (spins_.size() != flips_.size())
      throw DomainError("register spin and flip-count lengths differ");
  }

  std::size_t size() const noexcept { return spins_.size(); }

  Spin spin(std::size_t k) const { return spins_.at(index(k)); }
  std::uint64_t flip_count(std::size_t k) const { return flips_.at(index(k)); }

  void flip(std::size_t k) {
    const std::size_t i = index(k);
    spins_[i] = other(spins_[i]);
    ++flips_[i];
  }

  std::uint64_t total_flips() const noexcept {
    std::uint64_t n = 0;
    for (auto f : flips_) n += f;
    return n;
  }

  const std::vector<Spin>& spins() const noexcept { return spins_; }
  const std::vector<std::uint64_t>& flip_counts() const noexcept { return flips_; }

  friend bool operator==(const OrbitRegister&, const OrbitRegister&) = default;

 private:
  std::size_t index(std::size_t k) const {
    if (k < 1 || k > spins_.size())
      throw std::out_of_range("orbit index " + std::to_string(k) +
                              " outside 1.." + std::to_string(spins_.size()));
    return k - 1;
  }

  std::vector<Spin> spins_;
  std::vector<std::uint64_t> flips_;
};

inline Spin initial_spin(SpinPattern pattern, std::size_t k) noexcept {
  switch (pattern) {
    case SpinPattern::AllSpin1:
      return Spin::Spin1;
    case SpinPattern::AllSpin2:
      return Spin::Spin2;
    case SpinPattern::Alternating:
    default:
      return k % 2 == 1 ? Spin::Spin1 : Spin::Spin2;
  }
}

inline OrbitRegister init_register(const ModelParams& params) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.n_orbits);
  std::vector<Spin> spins(n);
  for (std::size_t k = 1; k <= n; ++k) spins[k - 1] = initial_spin(params.initial_spins, k);
  return OrbitRegister(std::move(spins), std::vector<std::uint64_t>(n, 0));
}

/// Copying form of OrbitRegister::flip.
inline OrbitRegister flip(OrbitRegister reg, std::size_t k) {
  reg.flip(k);
  return reg;
}

struct NearestOrbit {
  int orbit = 1;
  double distance = 0.0;
};

/// Nearest orbit to a radial ordinate measured along the vertical diameter.
/// Ties go to the inner orbit.
inline NearestOrbit nearest_orbit(double rho, const ModelParams& params) {
  if (!(rho >= 0.0)) throw DomainError("radial ordinate must be non-negative");
  const int n = params.n_orbits;
  const double below = std::floor(rho / params.orbit_spacing());
  int k_lo = below < 1.0 ? 1 : (below >= n ? n : static_cast<int>(below));
  int k_hi = k_lo < n ? k_lo + 1 : n;
  const double d_lo = std::abs(rho - params.orbit_radius(k_lo));
  const double d_hi = std::abs(rho - params.orbit_radius(k_hi));
  if (d_hi < d_lo) return {k_hi, d_hi};
  return {k_lo, d_lo};
}

/// Angular counts over 1-degree bins; bin b covers [b, b+1) degrees.
class Histogram {
 public:
  using Counts = std::array<std::uint64_t, kScreenBins>;

  std::uint64_t& at_bin(int b) { return counts_.at(slot(b)); }
  std::uint64_t at_bin(int b) const { return counts_.at(slot(b)); }

  const Counts& counts() const noexcept { return counts_; }
  Counts& counts() noexcept { return counts_; }

  std::uint64_t total() const noexcept {
    std::uint64_t s = 0;
    for (auto c : counts_) s += c;
    return s;
  }

  Histogram& operator+=(const Histogram& rhs) noexcept {
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += rhs.counts_[i];
    return *this;
  }
  friend Histogram operator+(Histogram lhs, const Histogram& rhs) noexcept {
    return lhs += rhs;
  }

  friend bool operator==(const Histogram&, const Histogram&) = default;

  static std::size_t slot(int b) {
    if (b < kFirstBin || b > kLastBin)
      throw std::out_of_range("screen bin " + std::to_string(b) + " outside [-90, 89]");
    return static_cast<std::size_t>(b - kFirstBin);
  }

 private:
  Counts counts_{};
};

enum class Sign : std::int8_t { Minus = -1, Plus = 1 };

constexpr double to_double(Sign s) noexcept { return s == Sign::Plus ? 1.0 : -1.0; }

/// Full history of one emitted particle.
struct ParticleRecord {
  double emission_ordinate = 0.0;
  std::optional<SlitTag> slit;  // empty when blocked
  bool displaced = false;
  double displacement_before = 0.0;
  double displacement_after = 0.0;
  int nearest_orbit = 0;
  Sign scatter_sign = Sign::Plus;
  double final_ordinate = 0.0;
  std::optional<double> angle;
  std::optional<int> screen_bin;

  bool blocked() const noexcept { return !slit.has_value(); }
};

struct RunRecord {
  ModelParams params;
  ExperimentContext context = ExperimentContext::BothRandom;
  std::uint64_t seed = 0;
  std::string prng;
  std::uint64_t n_emitted = 0;
  std::uint64_t n_blocked = 0;
  std::uint64_t n_registered = 0;
  std::uint64_t n_displaced = 0;
  Histogram slit1;
  Histogram slit2;
  Histogram total;
  OrbitRegister final_register;

  const Histogram& histogram(SlitTag t) const noexcept {
    return t == SlitTag::Slit1 ? slit1 : slit2;
  }

  double displaced_fraction() const noexcept {
    return n_registered == 0 ? 0.0
                             : static_cast<double>(n_displaced) /
                                   static_cast<double>(n_registered);
  }

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

// Names used by the config and JSON formats.

inline std::string_view to_string(ExperimentContext c) noexcept {
  switch (c) {
    case ExperimentContext::S1Only:
      return "s1";
    case ExperimentContext::S2Only:
      return "s2";
    case ExperimentContext::BothRandom:
      return "both";
    case ExperimentContext::SequentialHalves:
      return "sequential";
  }
  return "both";
}

inline std::optional<ExperimentContext> parse_context(std::string_view s) noexcept {
  for (auto c : {ExperimentContext::S1Only, ExperimentContext::S2Only,
                 ExperimentContext::BothRandom, ExperimentContext::SequentialHalves})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

inline std::string_view to_string(SpinPattern p) noexcept {
  switch (p) {
    case SpinPattern::AllSpin1:
      return "spin1";
    case SpinPattern::AllSpin2:
      return "spin2";
    case SpinPattern::Alternating:
      return "alternating";
  }
  return "alternating";
}

inline std::optional<SpinPattern> parse_spin_pattern(std::string_view s) noexcept {
  for (auto p : {SpinPattern::Alternating, SpinPattern::AllSpin1, SpinPattern::AllSpin2})
    if (to_string(p) == s) return p;
  return std::nullopt;
}

}  // namespace slitsim
