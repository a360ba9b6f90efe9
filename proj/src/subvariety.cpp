#include <algorithm>
#include <map>
#include <string>

#include "mlv/construct.hpp"
#include "mlv/errors.hpp"

namespace mlv {

namespace {

// Index bookkeeping for the lines of the product in one direction. A line is
// named by its point of the product with that factor removed.
struct Lines {
  Lines(const Shape& shape, std::size_t direction)
      : stride(shape.stride(direction)), size(shape.factor_size(direction)) {}

  std::uint64_t base(std::uint64_t rest) const { return (rest / stride) * stride * size + rest % stride; }
  std::uint64_t at(std::uint64_t rest, std::uint64_t y) const { return base(rest) + y * stride; }

  std::uint64_t stride;
  std::uint64_t size;
};

std::vector<std::uint64_t> fiber_counts(const PointSet& s, const Lines& lines, std::uint64_t rest_count) {
  std::vector<std::uint64_t> out(rest_count, 0);
  for (std::uint64_t r = 0; r < rest_count; ++r)
    for (std::uint64_t y = 0; y < lines.size; ++y)
      if (s.contains(lines.at(r, y))) ++out[r];
  return out;
}

std::vector<std::size_t> others(std::size_t arity, std::size_t direction) {
  const std::size_t drop[] = {direction};
  return complement(arity, drop);
}

SubvarietyCertificate find_impl(const Variety& v, std::size_t depth, std::optional<std::size_t> direction,
                                const FindOptions& options);

SubvarietyCertificate find_linear(const Variety& v, std::size_t depth, std::optional<std::size_t> direction,
                                  const ExactDensity& c) {
  const auto codim = static_cast<std::int64_t>(v.codim());
  const auto budget = codim_budget(1, c);
  if (codim != budget)
    throw VerificationFailure("linear variety has " + std::to_string(codim) + " independent forms but density " +
                              c.to_string());
  LedgerRecord rec{.depth = depth, .arity = 1, .direction = direction, .c = c, .r = codim, .r_bound = budget};
  rec.codim_contribution = codim;
  rec.budget = budget;
  SubvarietyCertificate cert{.input = v, .input_density = c, .output = v, .output_codim = codim,
                             .budget = budget, .ledger = {rec}};
  cert.verified = verify_certificate(v, cert);
  return cert;
}

SubvarietyCertificate find_impl(const Variety& v, std::size_t depth, std::optional<std::size_t> direction,
                                const FindOptions& options) {
  if (v.is_empty_marker()) throw EmptyVarietyError("the subvariety finder needs a nonempty variety");
  const auto& shape = v.shape();
  const auto arity = shape.arity();
  const auto total_dim = shape.total_dim();
  const auto total = shape.point_count();
  const auto c = density(v);
  if (arity == 1) return find_linear(v, depth, direction, c);

  const auto k = arity - 1;
  std::vector<DenseColumnsResult> columns;
  std::vector<MultilinearForm> w_forms;
  std::int64_t r_actual = 0;
  bool fiber_clamped = false;
  for (std::size_t i = 0; i < arity; ++i) {
    SubvarietyFinder finder = [&, i](const Variety& u) { return find_impl(u, depth + 1, i, options); };
    columns.push_back(dense_columns(v, i, finder));
    const auto& dc = columns.back();
    fiber_clamped = fiber_clamped || dc.threshold_clamped;
    r_actual = std::max(r_actual, static_cast<std::int64_t>(dc.w.codim()));
    const auto map = others(arity, i);
    const auto lifted = lift(dc.w, shape, map);
    w_forms.insert(w_forms.end(), lifted.forms().begin(), lifted.forms().end());
  }

  auto v_forms = v.forms();
  v_forms.insert(v_forms.end(), w_forms.begin(), w_forms.end());
  const Variety v_tilde(shape, v_forms);
  const auto v_tilde_members = members(v_tilde);

  // Smallest fiber of V~ over the points of U^(i), in every direction.
  const auto cdp = BoundTracker::c_double_prime(k, r_actual);
  std::optional<ExactDensity> measured;
  for (std::size_t i = 0; i < arity; ++i) {
    std::vector<MultilinearForm> u_forms;
    for (const auto& f : w_forms)
      if (!f.depends_on(i)) u_forms.push_back(f);
    const auto u_members = members(Variety(shape, u_forms));
    const Lines lines(shape, i);
    const auto rest_count = total / lines.size;
    const auto counts = fiber_counts(v_tilde_members, lines, rest_count);
    const auto ni = static_cast<std::int64_t>(shape.dim(i));
    for (std::uint64_t r = 0; r < rest_count; ++r) {
      if (!u_members.contains(lines.base(r))) continue;
      if (compare(counts[r], -ni, cdp, c) < 0)
        throw VerificationFailure("fiber of V~ in direction " + std::to_string(i + 1) + " has " +
                                  std::to_string(counts[r]) + " points, below c''|G_i|");
      const auto d = ExactDensity::fraction(shape.modulus(), counts[r], shape.dim(i));
      if (!measured || d < *measured) measured = d;
    }
  }

  const auto eps = BoundTracker::epsilon(k, r_actual);
  const auto s_formula = -floor_log_p(eps, c);
  const auto cap = static_cast<std::int64_t>(total_dim) + 1;
  std::int64_t s_used = std::min(s_formula, cap);
  const bool forced = depth == 0 && options.forced_approx_steps.has_value();
  if (forced) {
    if (*options.forced_approx_steps < 0) throw PreconditionError("forced approximation steps must be >= 0");
    s_used = *options.forced_approx_steps;
  }

  std::vector<std::size_t> all(arity);
  for (std::size_t i = 0; i < arity; ++i) all[i] = i;
  std::vector<MultilinearForm> full;
  for (const auto& f : v.forms())
    if (f.support().size() == arity) full.push_back(f);
  const auto approx = external_approx(MultilinearMap(shape, all, full), static_cast<std::size_t>(s_used));

  auto a_forms = approx.phi.components();
  a_forms.insert(a_forms.end(), w_forms.begin(), w_forms.end());
  const Variety a_tilde(shape, a_forms);
  const auto a_tilde_members = members(a_tilde);
  if (!v_tilde_members.subset_of(a_tilde_members))
    throw VerificationFailure("V~ is not inside A~");
  if (!(a_tilde_members == v_tilde_members)) {
    ClaimDiagnostic diag{.measured_fiber_density = *measured,
                         .claim_bound = ExactDensity::one(shape.modulus())};
    diag.group_size = total;
    for (std::uint64_t x = 0; x < total; ++x)
      if (a_tilde_members.contains(x) && !v_tilde_members.contains(x)) {
        if (diag.excess == 0) diag.point = x;
        ++diag.excess;
      }
    for (std::size_t j = 0; j <= k; ++j) diag.claim_bound = diag.claim_bound * *measured;
    diag.bound_observed = ExactDensity::fraction(shape.modulus(), diag.excess, total_dim) >= diag.claim_bound;
    throw ClaimViolation("A~ has " + std::to_string(diag.excess) + " points outside V~ after " +
                             std::to_string(s_used) + " approximation steps",
                         diag);
  }

  const auto out_codim = static_cast<std::int64_t>(a_tilde.codim());
  const auto budget = codim_budget(arity, c);
  LedgerRecord rec{.depth = depth,
                   .arity = arity,
                   .direction = direction,
                   .c = c,
                   .r = r_actual,
                   .r_bound = BoundTracker::r_bound(k, c),
                   .c_prime = BoundTracker::c_prime(k),
                   .c_double_prime = cdp,
                   .epsilon = eps,
                   .measured_fiber_density = measured,
                   .approx_steps_formula = s_formula,
                   .approx_steps_used = s_used,
                   .fiber_threshold_clamped = fiber_clamped,
                   .epsilon_clamped = !forced && s_used < s_formula,
                   .codim_from_approx = static_cast<std::int64_t>(approx.phi.codomain_dim()),
                   .codim_from_columns = static_cast<std::int64_t>(Variety(shape, w_forms).codim()),
                   .codim_contribution = out_codim,
                   .budget = budget};
  SubvarietyCertificate cert{.input = v, .input_density = c, .output = a_tilde, .output_codim = out_codim,
                             .budget = budget};
  for (const auto& dc : columns)
    cert.ledger.insert(cert.ledger.end(), dc.inner.ledger.begin(), dc.inner.ledger.end());
  cert.ledger.push_back(rec);
  cert.verified = verify_certificate(v, cert);
  return cert;
}

}  // namespace

DenseColumnsResult dense_columns(const Variety& v, std::size_t direction, const SubvarietyFinder& finder) {
  if (v.is_empty_marker()) throw EmptyVarietyError("dense_columns needs a nonempty variety");
  const auto& shape = v.shape();
  const auto arity = shape.arity();
  if (arity < 2) throw PreconditionError("dense_columns needs arity at least 2");
  if (direction >= arity) throw PreconditionError("direction outside the shape");
  const auto p = shape.modulus();
  const auto k = arity - 1;

  const auto m = members(v);
  const auto c = ExactDensity::fraction(p, m.count(), shape.total_dim());
  const auto cp = BoundTracker::c_prime(k);
  const std::size_t drop[] = {direction};
  const Shape rest = shape.without(drop);
  const auto rest_dim = static_cast<std::int64_t>(rest.total_dim());
  const auto rest_count = rest.point_count();
  const auto ni = static_cast<std::int64_t>(shape.dim(direction));
  const Lines lines(shape, direction);
  const auto fibers = fiber_counts(m, lines, rest_count);

  std::map<std::uint64_t, bool> small_cache;
  auto small = [&](std::uint64_t count) {
    auto it = small_cache.find(count);
    if (it == small_cache.end()) it = small_cache.emplace(count, compare(count, -ni, cp, c) <= 0).first;
    return it->second;
  };
  const PowerMonomial half_c{-1, rest_dim, 1};
  const PowerMonomial bad_cap = cp * PowerMonomial{1, rest_dim, -1};

  std::optional<std::uint64_t> chosen;
  PointSet slice(rest);
  std::uint64_t slice_size = 0, bad_size = 0;
  for (std::uint64_t y = 0; y < lines.size && !chosen; ++y) {
    PointSet candidate(rest);
    std::uint64_t usize = 0, bsize = 0;
    for (std::uint64_t r = 0; r < rest_count; ++r)
      if (m.contains(lines.at(r, y))) {
        candidate.insert(r);
        ++usize;
        if (small(fibers[r])) ++bsize;
      }
    if (compare(usize, 0, half_c, c) >= 0 && compare(bsize, 0, bad_cap, c) <= 0) {
      chosen = y;
      slice = std::move(candidate);
      slice_size = usize;
      bad_size = bsize;
    }
  }
  if (!chosen) throw VerificationFailure("no slice in direction " + std::to_string(direction + 1) +
                                         " is both large and mostly dense");

  const auto point = decode(p, shape.dim(direction), *chosen);
  const FieldVec values[] = {point};
  const auto u = slice_variety(v, drop, values);
  if (!(members(u) == slice)) throw VerificationFailure("slice variety disagrees with the enumerated slice");

  auto inner = finder(u);
  const auto& w = inner.output;
  if (w.is_empty_marker() || !(w.shape() == rest)) throw VerificationFailure("inner finder returned no usable W");
  const auto wm = members(w);
  if (!wm.subset_of(slice)) throw VerificationFailure("W is not inside the slice");

  PointSet bad(rest);
  for (auto x : wm.indices())
    if (small(fibers[x])) bad.insert(x);
  ConvFillReport fill;
  try {
    fill = conv_fill_check(w, bad);
  } catch (const PreconditionError& e) {
    throw VerificationFailure(std::string("convolution hypothesis failed inside dense_columns: ") + e.what());
  }
  if (!fill.success)
    throw VerificationFailure("no convolution witness at point " + std::to_string(*fill.first_failure) + " of W");

  const auto cp_power = cp.pow(std::int64_t{1} << k);
  for (const auto& wit : fill.witnesses) {
    std::uint64_t common = 0;
    for (std::uint64_t y = 0; y < lines.size; ++y) {
      bool all = true;
      for (auto corner : wit.corners)
        if (!m.contains(lines.at(corner, y))) {
          all = false;
          break;
        }
      if (!all) continue;
      ++common;
      if (!m.contains(lines.at(wit.base, y)))
        throw VerificationFailure("corner fibers meet outside the fiber over point " + std::to_string(wit.base));
    }
    if (compare(common, -ni, cp_power, c) < 0)
      throw VerificationFailure("corner fibers over point " + std::to_string(wit.base) + " meet in only " +
                                std::to_string(common) + " points");
  }

  std::uint64_t min_fiber = lines.size;
  for (auto x : wm.indices()) min_fiber = std::min(min_fiber, fibers[x]);

  return DenseColumnsResult{.direction = direction,
                            .w = w,
                            .slice_point = point,
                            .slice_size = slice_size,
                            .bad_size = bad_size,
                            .c = c,
                            .c_prime = cp,
                            .threshold_clamped = compare(1, -ni, cp, c) > 0,
                            .min_fiber_density = ExactDensity::fraction(p, min_fiber, shape.dim(direction)),
                            .flat_witnesses = fill.flat_witnesses,
                            .inner = std::move(inner)};
}

DenseColumnsResult dense_columns(const Variety& v, const SubvarietyFinder& finder) {
  return dense_columns(v, v.shape().arity() - 1, finder);
}

SubvarietyCertificate find_subvariety(const Variety& v, const FindOptions& options) {
  return find_impl(v, 0, std::nullopt, options);
}

VerifyReport verify_certificate(const Variety& v, const SubvarietyCertificate& cert) {
  VerifyReport report;
  const auto& out = cert.output;
  if (!(out.shape() == v.shape())) return report;
  const auto out_members = members(out);
  report.containment = out_members.subset_of(members(v));
  report.nonempty = !out.is_empty_marker() && out_members.count() > 0;
  if (!v.is_empty_marker()) {
    const auto c = density(v);
    report.budget = cert.output_codim == static_cast<std::int64_t>(out.codim()) &&
                    cert.output_codim <= codim_budget(v.shape().arity(), c);
  }
  return report;
}

}  // namespace mlv
