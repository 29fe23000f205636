#include "awmi/oracle.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "awmi/error.hpp"
#include "awmi/kernels.hpp"
#include "awmi/moments.hpp"
#include "awmi/summation.hpp"

namespace awmi {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// The oracle computes its own centroid with a plain loop so it shares no code
// with the moment kernels it is checking.
Centroid oracle_centroid(const Raster& raster) {
  CompensatedSum m00, m10, m01;
  for (int r = 0; r < raster.height(); ++r) {
    for (int c = 0; c < raster.width(); ++c) {
      const double f = raster(r, c);
      m00 += f;
      m10 += Raster::x_of(c) * f;
      m01 += Raster::y_of(r) * f;
    }
  }
  if (!(m00.value() > 0.0)) throw UndefinedError("oracle: raster has zero mass");
  return {m10.value() / m00.value(), m01.value() / m00.value()};
}

kernels::TuplePoints active_points(const Raster& raster, const DerivativeStack* stack) {
  const Centroid c = oracle_centroid(raster);
  kernels::TuplePoints pts;
  for (int r = 0; r < raster.height(); ++r) {
    for (int col = 0; col < raster.width(); ++col) {
      const double f = raster(r, col);
      if (f == 0.0) continue;
      const double x = Raster::x_of(col) - c.x, y = Raster::y_of(r) - c.y;
      pts.x.push_back(x);
      pts.y.push_back(y);
      pts.f.push_back(f);
      pts.adi1.push_back(stack ? x * stack->fx(r, col) + y * stack->fy(r, col) : 0.0);
    }
  }
  return pts;
}

void check_budget(std::size_t active, int points, std::uint64_t budget) {
  double tuples = 1.0;
  for (int i = 0; i < points; ++i) tuples *= static_cast<double>(active);
  if (tuples > static_cast<double>(budget)) {
    throw InvalidArgument("oracle tuple budget exceeded: " + std::to_string(active) + "^" + std::to_string(points) +
                          " tuples");
  }
}

double rel_dev(double closed, double oracle) {
  if (closed == oracle) return 0.0;
  if (oracle == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(closed - oracle) / std::abs(oracle);
}

}  // namespace

CoreSpec::CoreSpec(int points, std::vector<PrimitiveRef> primitives)
    : points_(points), primitives_(std::move(primitives)) {
  if (points_ < 2 || points_ > 3) throw InvalidArgument("core must use 2 or 3 points");
  if (primitives_.empty()) throw InvalidArgument("core needs at least one primitive");
  for (const auto& p : primitives_) {
    if (p.i < 1 || p.j <= p.i || p.j > points_) throw InvalidArgument("primitive indices must satisfy 1 <= i < j <= N");
  }
  for (int i = 1; i <= points_; ++i) {
    if (degree(i) == 0) throw InvalidArgument("point " + std::to_string(i) + " appears in no primitive");
  }
}

int CoreSpec::degree(int i) const {
  int d = 0;
  for (const auto& p : primitives_) d += (p.i == i) + (p.j == i);
  return d;
}

std::string CoreSpec::describe() const {
  std::ostringstream os;
  for (const auto& p : primitives_) os << "S(" << p.i << "," << p.j << ")";
  return os.str();
}

void DCoreSpec::validate() const {
  if (static_cast<int>(adi_powers.size()) != core.points()) throw InvalidArgument("one adi power per point required");
  for (int k : adi_powers) {
    if (k < 0) throw InvalidArgument("adi powers must be nonnegative");
  }
}

bool DCoreSpec::has_adi() const noexcept {
  for (int k : adi_powers) {
    if (k != 0) return true;
  }
  return false;
}

std::string DCoreSpec::describe() const {
  std::ostringstream os;
  os << core.describe();
  for (std::size_t i = 0; i < adi_powers.size(); ++i) {
    if (adi_powers[i] == 1) os << "A(" << i + 1 << ")";
    if (adi_powers[i] > 1) os << "A(" << i + 1 << ")^" << adi_powers[i];
  }
  return os.str();
}

OracleValue eval_core(const Raster& raster, const CoreSpec& spec, std::uint64_t budget) {
  const auto pts = active_points(raster, nullptr);
  check_budget(pts.size(), spec.points(), budget);
  return kernels::parallel::tuple_sum(pts, DCoreSpec{spec, std::vector<int>(spec.points(), 0)});
}

OracleValue eval_dcore(const Raster& raster, const DerivativeStack& stack, const DCoreSpec& spec,
                       std::uint64_t budget) {
  spec.validate();
  if (stack.width() != raster.width() || stack.height() != raster.height()) {
    throw InvalidArgument("derivative stack does not match raster dimensions");
  }
  const auto pts = active_points(raster, &stack);
  check_budget(pts.size(), spec.core.points(), budget);
  return kernels::parallel::tuple_sum(pts, spec);
}

CoreSpec ami_core(int k) {
  using P = PrimitiveRef;
  switch (k) {
    case 1: return CoreSpec(2, {P{1, 2}});
    case 2: return CoreSpec(2, {P{1, 2}, P{1, 2}});
    case 3: return CoreSpec(2, {P{1, 2}, P{1, 2}, P{1, 2}});
    case 4: return CoreSpec(3, {P{1, 2}, P{1, 3}});
    case 5: return CoreSpec(3, {P{1, 2}, P{1, 3}, P{1, 3}});
    case 6: return CoreSpec(3, {P{1, 2}, P{1, 3}, P{2, 3}});
    case 7: return CoreSpec(3, {P{1, 2}, P{1, 3}, P{2, 3}, P{2, 3}});
    default: throw InvalidArgument("AMI core index must be 1..7");
  }
}

DCoreSpec awmi_dcore(int k) {
  using P = PrimitiveRef;
  const CoreSpec s12sq(2, {P{1, 2}, P{1, 2}});
  const CoreSpec s12s13(3, {P{1, 2}, P{1, 3}});
  const CoreSpec s12s13sq(3, {P{1, 2}, P{1, 3}, P{1, 3}});
  switch (k) {
    case 1: return {s12sq, {1, 0}};
    case 2: return {s12sq, {1, 1}};
    case 3: return {s12s13, {0, 1, 1}};
    case 4: return {s12s13, {1, 1, 1}};
    case 5: return {s12s13sq, {0, 1, 0}};
    case 6: return {s12s13sq, {0, 0, 1}};
    case 7: return {s12s13sq, {0, 1, 1}};
    case 8: return {ami_core(7), {1, 0, 0}};
    default: throw InvalidArgument("DCore index must be 1..8");
  }
}

std::optional<DCoreSpec> oracle_spec(InvariantId id) {
  switch (id) {
    case InvariantId::AMI2: return DCoreSpec{ami_core(2), {0, 0}};
    case InvariantId::AMI7: return DCoreSpec{ami_core(7), {0, 0, 0}};
    case InvariantId::AWMI1_1: return awmi_dcore(1);
    case InvariantId::AWMI1_2: return awmi_dcore(2);
    case InvariantId::AWMI1_3: return awmi_dcore(3);
    case InvariantId::AWMI1_4: return awmi_dcore(4);
    case InvariantId::AWMI1_5: return awmi_dcore(5);
    case InvariantId::AWMI1_6: return awmi_dcore(6);
    case InvariantId::AWMI1_7: return awmi_dcore(7);
    case InvariantId::AWMI1_8: return awmi_dcore(8);
    case InvariantId::AWMI2: return std::nullopt;
  }
  return std::nullopt;
}

Raster random_raster(int width, int height, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::vector<double> v(static_cast<std::size_t>(width) * height);
  for (double& x : v) x = static_cast<double>(eng() >> 11) * 0x1.0p-53;
  return Raster(width, height, std::move(v));
}

namespace {

template <class Body>
VerifyReport run_trials(int trials, std::uint64_t seed, const VerifyOptions& opt, Body&& body) {
  if (trials < 1) throw InvalidArgument("need at least one trial");
  if (opt.min_width > opt.max_width || opt.min_height > opt.max_height || opt.min_width < 1 || opt.min_height < 1) {
    throw InvalidArgument("bad trial raster size range");
  }
  VerifyReport rep;
  rep.trials = trials;
  rep.seed = seed;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = splitmix64(seed * 0x100000001b3ULL + static_cast<std::uint64_t>(t));
    const int w = opt.min_width + static_cast<int>(splitmix64(s ^ 0x1) % (opt.max_width - opt.min_width + 1));
    const int h = opt.min_height + static_cast<int>(splitmix64(s ^ 0x2) % (opt.max_height - opt.min_height + 1));
    const Raster img = random_raster(w, h, s);
    TrialResult tr = body(img);
    tr.width = w;
    tr.height = h;
    rep.max_rel_deviation = std::max(rep.max_rel_deviation, tr.rel_deviation);
    rep.results.push_back(tr);
  }
  return rep;
}

}  // namespace

VerifyReport verify_expansion(InvariantId id, int trials, std::uint64_t seed, const VerifyOptions& options) {
  const auto spec = oracle_spec(id);
  if (!spec) throw InvalidArgument(std::string(name(id)) + " has no Core/DCore oracle");
  const bool ami = id == InvariantId::AMI2 || id == InvariantId::AMI7;
  auto rep = run_trials(trials, seed, options, [&](const Raster& img) {
    TrialResult tr;
    OracleValue ov;
    if (ami) {
      const auto mt = MomentTable::build(img, 3);
      tr.closed_form = id == InvariantId::AMI2 ? ami2_numerator(mt) : ami7_numerator(mt);
      ov = eval_core(img, spec->core);
    } else {
      const auto stack = derivative_stack(img, options.diff);
      tr.closed_form = awmi1_numerator(id, DMTable::build(img, stack));
      ov = eval_dcore(img, stack, *spec);
    }
    tr.oracle = ov.value;
    tr.magnitude = ov.magnitude;
    tr.rel_deviation = rel_dev(tr.closed_form, ov.value);
    return tr;
  });
  rep.subject = std::string(name(id));
  rep.spec = spec->describe();
  rep.tolerance = options.tolerance > 0 ? options.tolerance : (spec->core.points() == 2 ? 1e-9 : 1e-6);
  rep.passed = rep.max_rel_deviation <= rep.tolerance;
  return rep;
}

VerifyReport verify_zero_core(int ami_index, int trials, std::uint64_t seed, const VerifyOptions& options) {
  const CoreSpec core = ami_core(ami_index);
  auto rep = run_trials(trials, seed, options, [&](const Raster& img) {
    TrialResult tr;
    const OracleValue ov = eval_core(img, core);
    tr.oracle = ov.value;
    tr.magnitude = ov.magnitude;
    tr.rel_deviation = ov.magnitude > 0 ? std::abs(ov.value) / ov.magnitude : 0.0;
    return tr;
  });
  rep.subject = "AMI" + std::to_string(ami_index);
  rep.spec = core.describe();
  rep.tolerance = options.tolerance > 0 ? options.tolerance : 1e-9;
  rep.passed = rep.max_rel_deviation <= rep.tolerance;
  return rep;
}

}  // namespace awmi
