#include "hecke/rd_analyzer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <random>
#include <thread>
#include <unordered_map>
#include <mutex>
#include <numeric>

#include "hecke/error.hpp"

namespace hecke {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HECKE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  return n;
}

namespace {

// Runs body(i) for i in [0, n) on up to worker_count() threads.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  const auto workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const auto i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}


// Exact integer shortcut for SL2/PSL2 over localized rings: a matrix is kept as
// integer entries over a common denominator, and the right coset H x (H the
// integral matrices) is identified by the Hermite form of the row lattice.
// Every step checks its range; callers fall back to the rational path on
// overflow.
namespace modular {

using i128 = __int128;
constexpr i128 kLimit = static_cast<i128>(1) << 100;

struct IntMatrix {
  std::int64_t e[4];
  std::int64_t den;
};

struct Key {
  std::int64_t v[4];
  bool operator==(const Key& o) const { return std::equal(v, v + 4, o.v); }
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::size_t h = 0;
    for (auto x : k.v) h = h * 1'000'003u ^ std::hash<std::int64_t>{}(x);
    return h;
  }
};

i128 abs128(i128 x) { return x < 0 ? -x : x; }

bool small(i128 x) { return x >= INT64_MIN / 2 && x <= INT64_MAX / 2; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  if (small(a) && small(b))
    return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i128 floor_div(i128 a, i128 b) {
  if (small(a) && small(b)) {
    const auto x = static_cast<std::int64_t>(a), y = static_cast<std::int64_t>(b);
    std::int64_t q = x / y;
    if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
    return q;
  }
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool fits64(i128 x) { return x >= INT64_MIN / 4 && x <= INT64_MAX / 4; }

std::optional<IntMatrix> to_int(const GroupElement& g) {
  const auto& m = g.as_matrix();
  const Rational* q[4] = {&m.a, &m.b, &m.c, &m.d};
  mpz_class den = 1;
  for (auto* x : q) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x->get_den_mpz_t());
  if (!den.fits_slong_p()) return std::nullopt;
  IntMatrix out;
  out.den = den.get_si();
  for (int i = 0; i < 4; ++i) {
    mpz_class v = q[i]->get_num() * (den / q[i]->get_den());
    if (!v.fits_slong_p() || !fits64(v.get_si())) return std::nullopt;
    out.e[i] = v.get_si();
  }
  return out;
}

std::optional<IntMatrix> product(const IntMatrix& x, const IntMatrix& y) {
  const i128 n[4] = {static_cast<i128>(x.e[0]) * y.e[0] + static_cast<i128>(x.e[1]) * y.e[2],
                     static_cast<i128>(x.e[0]) * y.e[1] + static_cast<i128>(x.e[1]) * y.e[3],
                     static_cast<i128>(x.e[2]) * y.e[0] + static_cast<i128>(x.e[3]) * y.e[2],
                     static_cast<i128>(x.e[2]) * y.e[1] + static_cast<i128>(x.e[3]) * y.e[3]};
  // The denominator is left unreduced; coset_key reduces what it reports.
  const i128 den = static_cast<i128>(x.den) * y.den;
  if (!fits64(den)) return std::nullopt;
  IntMatrix out;
  out.den = static_cast<std::int64_t>(den);
  for (int i = 0; i < 4; ++i) {
    if (!fits64(n[i])) return std::nullopt;
    out.e[i] = static_cast<std::int64_t>(n[i]);
  }
  return out;
}

std::optional<Key> coset_key(const IntMatrix& m) {
  i128 r1[2] = {m.e[0], m.e[1]};
  i128 r2[2] = {m.e[2], m.e[3]};
  while (r2[0] != 0) {
    const i128 q = floor_div(r1[0], r2[0]);
    r1[0] -= q * r2[0];
    r1[1] -= q * r2[1];
    if (abs128(r1[1]) > kLimit) return std::nullopt;
    std::swap(r1[0], r2[0]);
    std::swap(r1[1], r2[1]);
  }
  if (r1[0] < 0) {
    r1[0] = -r1[0];
    r1[1] = -r1[1];
  }
  const i128 delta = abs128(r2[1]);
  if (delta == 0) return std::nullopt;
  i128 beta = r1[1] % delta;
  if (beta < 0) beta += delta;
  const i128 ga = gcd128(r1[0], m.den), gb = gcd128(beta == 0 ? m.den : beta, m.den);
  Key k{{static_cast<std::int64_t>(r1[0] / ga), static_cast<std::int64_t>(m.den / ga),
         static_cast<std::int64_t>(beta / gb), static_cast<std::int64_t>(m.den / gb)}};
  return k;
}

}  // namespace modular

}  // namespace

// ---------------------------------------------------------------------------
// Operator

std::size_t TruncatedOperator::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns) n += c.rows.size();
  return n;
}

bool TruncatedOperator::is_symmetric() const {
  std::map<std::pair<std::uint32_t, std::uint32_t>, const Rational*> entries;
  for (std::uint32_t j = 0; j < columns.size(); ++j)
    for (std::size_t k = 0; k < columns[j].rows.size(); ++k) {
      if (columns[j].exact.empty()) throw DomainError("symmetry check needs exact entries");
      entries[{columns[j].rows[k], j}] = &columns[j].exact[k];
    }
  for (const auto& [ij, v] : entries) {
    auto it = entries.find({ij.second, ij.first});
    if (it == entries.end() || *it->second != *v) return false;
  }
  return true;
}

TruncatedOperator operator_matrix(const HeckeElement& f, std::uint32_t R, bool keep_exact) {
  const auto& store = f.store();
  if (!store.radius_complete() || *store.radius_complete() < R)
    throw BallIncomplete("operator radius " + std::to_string(R) + " exceeds the enumerated ball");
  TruncatedOperator op;
  op.radius = R;
  std::vector<std::int64_t> position(store.coset_count(), -1);
  for (std::uint32_t i = 0; i < store.coset_count(); ++i) {
    const auto& dc = store.coset(CosetId{i}).dc;
    if (!dc) continue;
    const auto& wl = store.double_coset(*dc).word_length;
    if (wl && *wl <= R) {
      position[i] = static_cast<std::int64_t>(op.cosets.size());
      op.cosets.push_back(CosetId{i});
    }
  }

  struct Term {
    GroupElement z;
    Rational c;
    double v;
  };
  std::vector<Term> terms;
  for (const auto& [d, c] : f.coeffs())
    for (auto m : store.double_coset(d).members) terms.push_back({store.rep(m), c, c.get_d()});

  // Integer shortcut for the matrix kinds; empty when any entry is too large.
  const auto kind = store.pair().kind();
  bool fast = kind == GroupKind::SpecialLinear || kind == GroupKind::ProjectiveSpecialLinear;
  std::vector<modular::IntMatrix> z_int, y_int;
  std::unordered_map<modular::Key, std::uint32_t, modular::KeyHash> by_key;
  if (fast) {
    for (const auto& t : terms) {
      auto m = modular::to_int(t.z);
      if (!m) { fast = false; break; }
      z_int.push_back(*m);
    }
    for (std::size_t j = 0; fast && j < op.cosets.size(); ++j) {
      auto m = modular::to_int(store.rep(op.cosets[j]));
      auto k = m ? modular::coset_key(*m) : std::nullopt;
      if (!k) { fast = false; break; }
      y_int.push_back(*m);
      by_key.emplace(*k, static_cast<std::uint32_t>(j));
    }
  }

  op.columns.resize(op.cosets.size());
  parallel_for(op.cosets.size(), [&](std::size_t j) {
    // Column y: (lambda(f) delta_y)(Hx) = f(x y^-1), nonzero at Hx = H z y.
    const auto& y = store.rep(op.cosets[j]);
    std::vector<std::pair<std::uint32_t, std::size_t>> hits;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      if (fast) {
        auto m = modular::product(z_int[t], y_int[j]);
        auto k = m ? modular::coset_key(*m) : std::nullopt;
        if (k) {
          if (auto it = by_key.find(*k); it != by_key.end()) hits.emplace_back(it->second, t);
          continue;
        }
      }
      auto x = store.find(mul(terms[t].z, y));
      if (!x || x->value >= position.size() || position[x->value] < 0) continue;
      hits.emplace_back(static_cast<std::uint32_t>(position[x->value]), t);
    }
    std::sort(hits.begin(), hits.end());
    auto& col = op.columns[j];
    col.rows.reserve(hits.size());
    col.values.reserve(hits.size());
    for (const auto& [row, t] : hits) {
      col.rows.push_back(row);
      col.values.push_back(terms[t].v);
      if (keep_exact) col.exact.push_back(terms[t].c);
    }
  });
  return op;
}

NormEstimate truncated_norm(const TruncatedOperator& op, const PowerIterationOptions& opt,
                            const std::vector<double>* start) {
  NormEstimate est;
  const auto n = op.dimension();
  if (n == 0) {
    est.converged = true;
    return est;
  }
  std::vector<double> v(n, 0.0), u(n), w(n);
  double start_norm = 0;
  if (start) {
    for (std::size_t i = 0; i < std::min(n, start->size()); ++i) v[i] = (*start)[i];
    for (double x : v) start_norm += x * x;
  }
  if (start_norm == 0) {
    std::fill(v.begin(), v.end(), 1.0);
    v[0] += 1.0;
  }
  auto normalize = [](std::vector<double>& x) {
    double s = 0;
    for (double a : x) s += a * a;
    s = std::sqrt(s);
    if (s > 0)
      for (double& a : x) a /= s;
    return s;
  };
  normalize(v);

  double prev = -1;
  for (std::uint32_t it = 1; it <= opt.max_iterations; ++it) {
    std::fill(u.begin(), u.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& col = op.columns[j];
      const double vj = v[j];
      if (vj == 0) continue;
      for (std::size_t k = 0; k < col.rows.size(); ++k) u[col.rows[k]] += col.values[k] * vj;
    }
    double mu = 0;  // ||A v||^2 with ||v|| = 1
    for (double a : u) mu += a * a;
    if (mu > est.value * est.value) {
      est.value = std::sqrt(mu);
      est.vector = v;
    }
    est.iterations = it;
    if (mu == 0 || (prev >= 0 && std::abs(mu - prev) <= opt.tol * mu)) {
      est.converged = true;
      if (est.vector.empty()) est.vector = v;
      return est;
    }
    prev = mu;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& col = op.columns[j];
      double s = 0;
      for (std::size_t k = 0; k < col.rows.size(); ++k) s += col.values[k] * u[col.rows[k]];
      w[j] = s;
    }
    if (normalize(w) == 0) {
      est.converged = true;
      return est;
    }
    v.swap(w);
  }
  est.warning = "power iteration stopped at the iteration cap (" + std::to_string(opt.max_iterations) + ")";
  return est;
}

Rational matrix_moment(const TruncatedOperator& op, std::uint32_t n) {
  const auto dim = op.dimension();
  std::vector<Rational> v(dim, Rational(0)), u(dim);
  if (dim == 0) return 0;
  v[0] = 1;
  for (std::uint32_t step = 0; step < 2 * n; ++step) {
    std::fill(u.begin(), u.end(), Rational(0));
    for (std::size_t j = 0; j < dim; ++j) {
      if (v[j] == 0) continue;
      const auto& col = op.columns[j];
      if (col.exact.size() != col.rows.size()) throw DomainError("matrix moment needs exact entries");
      for (std::size_t k = 0; k < col.rows.size(); ++k) u[col.rows[k]] += col.exact[k] * v[j];
    }
    v.swap(u);
  }
  return v[0];
}

SpectralBound spectral_lower_bound(HeckeAlgebra& algebra, const HeckeElement& f, std::uint32_t N) {
  SpectralBound out;
  auto m = algebra.moments(f, N);
  out.moments = std::move(m.a);
  out.complete = m.complete;
  out.warning = std::move(m.warning);
  for (std::size_t n = 0; n < out.moments.size(); ++n)
    out.rho.push_back(std::pow(out.moments[n].get_d(), 1.0 / (2.0 * static_cast<double>(n + 1))));
  return out;
}

std::uint32_t support_radius(const HeckeElement& f) {
  std::uint32_t r = 0;
  for (const auto& [d, c] : f.coeffs()) {
    const auto& wl = f.store().double_coset(d).word_length;
    if (!wl) throw LengthUndefinedOnSupport("class " + std::to_string(d.value) + " has no word length");
    r = std::max(r, *wl);
  }
  return r;
}

// ---------------------------------------------------------------------------
// RD profiles

std::string_view verdict_name(RdProfile::Verdict v) {
  switch (v) {
    case RdProfile::Verdict::ObstructedNonunimodular: return "ObstructedNonunimodular";
    case RdProfile::Verdict::PolynomialCompatible: return "PolynomialCompatible";
    case RdProfile::Verdict::SuperpolynomialRatio: return "SuperpolynomialRatio";
    case RdProfile::Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

struct TestFunction {
  std::uint32_t r;
  std::string family;
  bool nonnegative;
  HeckeElement f;
};

std::vector<TestFunction> test_functions(const CosetStore& store, std::uint32_t r_max, const FamilySpec& spec) {
  std::vector<std::vector<DoubleCosetId>> shells(r_max + 1);
  for (auto d : store.class_ball(r_max)) shells[*store.double_coset(d).word_length].push_back(d);

  std::vector<TestFunction> out;
  std::vector<DoubleCosetId> ball;
  for (std::uint32_t r = 0; r <= r_max; ++r) {
    ball.insert(ball.end(), shells[r].begin(), shells[r].end());
    if (spec.shells && !shells[r].empty()) {
      HeckeElement f(store);
      for (auto d : shells[r]) f.add(d, 1);
      out.push_back({r, "shell", true, std::move(f)});
    }
    if (spec.balls) {
      HeckeElement f(store);
      for (auto d : ball) f.add(d, 1);
      out.push_back({r, "ball", true, std::move(f)});
    }
    auto seeded = [&](std::uint32_t k, bool sign) {
      std::mt19937_64 rng(spec.seed * 1'000'003ULL + r * 7919ULL + k * 2 + (sign ? 1 : 0));
      std::uniform_int_distribution<int> coin(0, 1), coeff(1, 9);
      HeckeElement f(store);
      for (auto d : ball)
        if (coin(rng)) f.add(d, (sign && coin(rng)) ? -coeff(rng) : coeff(rng));
      if (f.is_zero()) f.add(ball[std::uniform_int_distribution<std::size_t>(0, ball.size() - 1)(rng)], 1);
      return f;
    };
    for (std::uint32_t k = 0; k < spec.random_count; ++k)
      out.push_back({r, "random-" + std::to_string(k), true, seeded(k, false)});
    if (spec.signed_sanity)
      for (std::uint32_t k = 0; k < std::max<std::uint32_t>(1, spec.random_count); ++k)
        out.push_back({r, "signed-" + std::to_string(k), false, seeded(k, true)});
  }
  return out;
}

}  // namespace

std::uint32_t default_profile_radius(const HeckePair& pair) {
  if (pair.label == "z:1") return 20;
  if (pair.label == "z:2") return 8;
  if (pair.label == "dinf") return 10;
  if (pair.kind() == GroupKind::SpecialLinear || pair.kind() == GroupKind::ProjectiveSpecialLinear) return 4;
  return 3;
}

WeightedFit rd_weighted_fit(const RdProfile& p) {
  WeightedFit fit;
  const auto& grid = p.thresholds.s_grid;
  if (p.records.empty() || grid.empty()) throw NoStableFit("empty profile");
  const auto r_max = p.r_max;
  const auto tail_start =
      r_max - std::min<std::uint32_t>(r_max, static_cast<std::uint32_t>(std::floor(p.thresholds.tail_fraction * r_max)));
  std::optional<std::size_t> chosen;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> c(r_max + 1, 0.0);
    for (const auto& rec : p.records)
      if (rec.weighted[k] > 0) c[rec.r] = std::max(c[rec.r], rec.norm / rec.weighted[k]);
    double running = 0, at_tail = 0;
    for (std::uint32_t r = 0; r <= r_max; ++r) {
      running = std::max(running, c[r]);
      if (r == tail_start) at_tail = running;
    }
    fit.c_by_s.push_back(running);
    if (!chosen && running <= at_tail * (1 + p.thresholds.stability_tol)) chosen = k;
  }
  if (!chosen) throw NoStableFit("no s in the grid gives a stable constant");
  fit.stable = true;
  fit.s_hat = grid[*chosen];
  fit.c_hat = fit.c_by_s[*chosen];
  return fit;
}

RdProfile rd_profile(HeckeAlgebra& algebra, const LengthFunction& l, std::uint32_t r_max, const FamilySpec& families,
                     const RdThresholds& t) {
  auto& store = algebra.store();
  RdProfile p;
  p.pair = store.pair().label;
  p.r_max = r_max;
  p.families = families;
  p.thresholds = t;

  const auto uni = unimodularity_check(store.pair(), store.caps().max_orbit);
  p.unimodular = uni.verdict;
  for (const auto& [g, delta] : uni.witnesses) p.unimodularity_witnesses.emplace_back(render_element(g), to_string(delta));
  if (!uni.verdict) {
    p.verdict = RdProfile::Verdict::ObstructedNonunimodular;
    p.warnings.push_back("not relatively unimodular; operator estimates not evaluated");
    return p;
  }
  if (!uni.decisive) p.warnings.push_back("unimodularity only probed on sample elements");

  if (!store.radius_complete() || *store.radius_complete() < r_max)
    throw BallIncomplete("profile radius " + std::to_string(r_max) + " exceeds the enumerated ball");
  const auto radius = *store.radius_complete();
  if (r_max + t.padding > radius)
    p.warnings.push_back("padding truncated to the enumerated radius " + std::to_string(radius));

  auto tasks = test_functions(store, r_max, families);

  // Moments intern classes, so they run first and sequentially, under a
  // shared coset budget.
  std::vector<std::optional<double>> rho(tasks.size());
  const auto base_cosets = store.coset_count();
  for (std::size_t i = 0; i < tasks.size() && t.moment_order > 0; ++i) {
    const auto& f = tasks[i].f;
    if (!algebra.is_self_adjoint(f)) continue;
    ScopedCaps caps(store, Caps{std::min(store.caps().max_cosets, base_cosets + t.moment_budget), store.caps().max_orbit});
    const auto sb = spectral_lower_bound(algebra, f, t.moment_order);
    if (!sb.rho.empty()) rho[i] = *std::max_element(sb.rho.begin(), sb.rho.end());
    if (!sb.complete) p.partial = true;
    if (!sb.complete) p.warnings.push_back("r=" + std::to_string(tasks[i].r) + " " + tasks[i].family + ": " + sb.warning);
  }

  std::vector<NormEstimate> est(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    const auto R = std::min(radius, tasks[i].r + t.padding);
    est[i] = truncated_norm(operator_matrix(tasks[i].f, R, false), t.power);
    est[i].vector.clear();
  });

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    RdRecord rec;
    rec.r = tasks[i].r;
    rec.family = tasks[i].family;
    rec.nonnegative = tasks[i].nonnegative;
    rec.l2 = norms(tasks[i].f).l2_value;
    rec.truncated = est[i].value;
    rec.rho = rho[i];
    rec.norm = std::max(rec.truncated, rho[i].value_or(0.0));
    rec.ratio = rec.l2 > 0 ? rec.norm / rec.l2 : 0;
    for (double s : t.s_grid) rec.weighted.push_back(*norms(tasks[i].f, &l, s).weighted);
    rec.warning = est[i].warning;
    if (!rec.warning.empty()) p.partial = true;
    if (!rec.warning.empty()) p.warnings.push_back("r=" + std::to_string(rec.r) + " " + rec.family + ": " + rec.warning);
    p.records.push_back(std::move(rec));
  }

  for (std::uint32_t r = 0; r <= r_max; ++r) {
    RdBest b;
    b.r = r;
    for (const auto& rec : p.records) {
      if (rec.r != r || !rec.nonnegative) continue;
      if (rec.ratio > b.best_ratio) {
        b.best_ratio = rec.ratio;
        b.witness = rec.family;
      }
    }
    if (!b.witness.empty()) p.best.push_back(b);
  }
  std::vector<double> lx, x, y;
  for (const auto& b : p.best) {
    lx.push_back(std::log1p(static_cast<double>(b.r)));
    x.push_back(b.r);
    y.push_back(std::log(b.best_ratio));
  }
  p.poly_fit = least_squares(lx, y);
  p.exp_fit = least_squares(x, y);

  try {
    p.weighted = rd_weighted_fit(p);
  } catch (const NoStableFit& e) {
    p.warnings.push_back(e.what());
  }

  if (p.weighted && p.poly_fit.slope <= t.max_poly_slope)
    p.verdict = RdProfile::Verdict::PolynomialCompatible;
  else if (r_max < 3)
    p.verdict = RdProfile::Verdict::Inconclusive;
  else
    p.verdict = RdProfile::Verdict::SuperpolynomialRatio;
  return p;
}

// ---------------------------------------------------------------------------
// Kesten

HeckeElement kesten_default_element(HeckeAlgebra& algebra) {
  auto& store = algebra.store();
  HeckeElement f(store);
  for (auto d : store.class_ball(1)) f.add(d, 1);
  f *= Rational(1) / norms(f).l1;
  return (f + algebra.involution(f)) * Rational(1, 2);
}

KestenReport kesten_diagnostic(HeckeAlgebra& algebra, const HeckeElement& f, const KestenOptions& opt) {
  auto& store = algebra.store();
  KestenReport k;
  k.threshold = opt.threshold;
  k.f_description = to_text(f);
  const auto uni = unimodularity_check(store.pair(), store.caps().max_orbit);
  k.unimodular = uni.verdict;
  if (!uni.verdict) k.warnings.push_back("pair is not relatively unimodular; the criterion is stated for the unimodular case");
  for (const auto& [d, c] : f.coeffs())
    if (c < 0) k.warnings.push_back("f has negative coefficients");

  SpectralBound sb;
  {
    ScopedCaps caps(store, Caps{std::min(store.caps().max_cosets, store.coset_count() + opt.moment_budget),
                                store.caps().max_orbit});
    sb = spectral_lower_bound(algebra, f, opt.N);
  }
  k.moments = sb.moments;
  k.rho = sb.rho;
  k.moments_complete = sb.complete;
  if (!sb.complete) k.warnings.push_back(sb.warning);

  k.l1 = norms(f).l1_value;
  const auto radius = store.radius_complete().value_or(0);
  k.operator_radius = std::min(radius, support_radius(f) + opt.padding);
  const auto est = truncated_norm(operator_matrix(f, k.operator_radius, false), opt.power);
  k.truncated = est.value;
  if (!est.warning.empty()) k.warnings.push_back(est.warning);
  const double rho_max = k.rho.empty() ? 0.0 : *std::max_element(k.rho.begin(), k.rho.end());
  k.index = k.l1 > 0 ? std::max(rho_max, k.truncated) / k.l1 : 0;
  return k;
}

// ---------------------------------------------------------------------------
// Coherence

CoherenceReport check_estimator_coherence(HeckeAlgebra& algebra, const HeckeElement& f,
                                          const std::vector<std::uint32_t>& radii_in, std::uint32_t N,
                                          const PowerIterationOptions& power) {
  CoherenceReport rep;
  auto check = [&](bool ok, std::string what) {
    if (!ok) rep.failures.push_back(what);
    rep.checks.push_back((ok ? "ok   " : "FAIL ") + what);
  };
  auto& store = algebra.store();
  auto radii = radii_in;
  std::sort(radii.begin(), radii.end());
  const bool self_adjoint = algebra.is_self_adjoint(f);
  bool delta_one = true;
  for (const auto& [d, c] : f.coeffs()) delta_one = delta_one && store.double_coset(d).delta == 1;
  const bool unimodular = unimodularity_check(store.pair(), store.caps().max_orbit).verdict;
  const double l1 = norms(f).l1_value;
  const auto L = support_radius(f);

  const auto sb = spectral_lower_bound(algebra, f, N);
  for (std::size_t n = 1; n < sb.rho.size(); ++n)
    check(sb.rho[n] >= sb.rho[n - 1] - 1e-12, "rho_" + std::to_string(n + 1) + " >= rho_" + std::to_string(n));

  std::vector<double> warm;
  double prev = -1;
  for (auto R : radii) {
    const auto op = operator_matrix(f, R, true);
    const auto est = truncated_norm(op, power, warm.empty() ? nullptr : &warm);
    warm = est.vector;
    const auto tag = " at R=" + std::to_string(R);
    if (prev >= 0) check(est.value >= prev - 1e-9, "projection monotonicity" + tag);
    prev = est.value;
    if (unimodular) check(est.value <= l1 + 1e-9, "l1 upper bound" + tag);
    if (self_adjoint && delta_one) check(op.is_symmetric(), "exact symmetry" + tag);
    for (std::uint32_t n = 1; n <= sb.moments.size(); ++n) {
      if (2 * n * L > R) break;
      const auto a = matrix_moment(op, n);
      check(a == sb.moments[n - 1], "a_" + std::to_string(n) + " equals the matrix moment" + tag);
      check(sb.rho[n - 1] <= est.value + 1e-6, "rho_" + std::to_string(n) + " <= truncated norm" + tag);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Export

nlohmann::json to_json(const RdProfile& p) {
  nlohmann::json j;
  j["pair"] = p.pair;
  j["r_max"] = p.r_max;
  j["verdict"] = verdict_name(p.verdict);
  j["unimodular"] = p.unimodular;
  j["partial"] = p.partial;
  nlohmann::json wit = nlohmann::json::array();
  for (const auto& [g, d] : p.unimodularity_witnesses) wit.push_back({{"element", g}, {"delta", d}});
  j["unimodularity_witnesses"] = wit;
  j["families"] = {{"shells", p.families.shells},
                   {"balls", p.families.balls},
                   {"random_count", p.families.random_count},
                   {"signed_sanity", p.families.signed_sanity},
                   {"seed", p.families.seed}};
  nlohmann::json grid = nlohmann::json::array();
  for (double s : p.thresholds.s_grid) grid.push_back(format_double(s));
  j["thresholds"] = {{"padding", p.thresholds.padding},
                     {"moment_order", p.thresholds.moment_order},
                     {"moment_budget", p.thresholds.moment_budget},
                     {"max_poly_slope", format_double(p.thresholds.max_poly_slope)},
                     {"stability_tol", format_double(p.thresholds.stability_tol)},
                     {"tail_fraction", format_double(p.thresholds.tail_fraction)},
                     {"power_tol", format_double(p.thresholds.power.tol)},
                     {"power_max_iterations", p.thresholds.power.max_iterations},
                     {"s_grid", grid}};
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : p.records) {
    nlohmann::json w = nlohmann::json::array();
    for (double v : r.weighted) w.push_back(format_double(v));
    recs.push_back({{"r", r.r},
                    {"family", r.family},
                    {"nonnegative", r.nonnegative},
                    {"l2", format_double(r.l2)},
                    {"truncated_norm", format_double(r.truncated)},
                    {"rho", r.rho ? nlohmann::json(format_double(*r.rho)) : nlohmann::json(nullptr)},
                    {"norm_lower_bound", format_double(r.norm)},
                    {"ratio", format_double(r.ratio)},
                    {"weighted_norms", w}});
  }
  j["records"] = recs;
  nlohmann::json best = nlohmann::json::array();
  for (const auto& b : p.best) best.push_back({{"r", b.r}, {"best_ratio", format_double(b.best_ratio)}, {"witness", b.witness}});
  j["best"] = best;
  j["fits"] = {{"poly_slope", format_double(p.poly_fit.slope)},
               {"poly_r2", format_double(p.poly_fit.r2)},
               {"exp_slope", format_double(p.exp_fit.slope)},
               {"exp_r2", format_double(p.exp_fit.r2)}};
  if (p.weighted) {
    nlohmann::json c = nlohmann::json::array();
    for (double v : p.weighted->c_by_s) c.push_back(format_double(v));
    j["weighted_fit"] = {{"s_hat", format_double(p.weighted->s_hat)}, {"c_hat", format_double(p.weighted->c_hat)}, {"c_by_s", c}};
  } else {
    j["weighted_fit"] = nullptr;
  }
  j["warnings"] = p.warnings;
  return j;
}

std::string to_csv(const RdProfile& p) {
  std::string out = "r,family,l2,truncated_norm,rho,norm_lower_bound,ratio\n";
  for (const auto& r : p.records)
    out += std::to_string(r.r) + "," + r.family + "," + format_double(r.l2) + "," + format_double(r.truncated) + "," +
           (r.rho ? format_double(*r.rho) : "") + "," + format_double(r.norm) + "," + format_double(r.ratio) + "\n";
  return out;
}

nlohmann::json to_json(const KestenReport& k) {
  nlohmann::json moments = nlohmann::json::array(), rho = nlohmann::json::array();
  for (const auto& a : k.moments) moments.push_back(to_string(a));
  for (double r : k.rho) rho.push_back(format_double(r));
  return {{"f", k.f_description},
          {"moments", moments},
          {"rho", rho},
          {"l1", format_double(k.l1)},
          {"truncated_norm", format_double(k.truncated)},
          {"operator_radius", k.operator_radius},
          {"amenability_index", format_double(k.index)},
          {"threshold", format_double(k.threshold)},
          {"threshold_note", "heuristic"},
          {"unimodular", k.unimodular},
          {"moments_complete", k.moments_complete},
          {"warnings", k.warnings}};
}

std::string to_csv(const KestenReport& k) {
  std::string out = "n,a_n,rho_n\n";
  for (std::size_t n = 0; n < k.moments.size(); ++n)
    out += std::to_string(n + 1) + "," + to_string(k.moments[n]) + "," + format_double(k.rho[n]) + "\n";
  return out;
}

}  // namespace hecke
