#pragma once

// Symbolic entire functions with log-scale evaluation.
//
// A function is an immutable tree of nodes (polynomials, exponentials of
// polynomials, canonical products, gap series and their arithmetic
// combinations). Evaluation always returns LogComplex, so values such as
// exp(exp(r)) stay representable.

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "growthlab/errors.hpp"
#include "growthlab/log_complex.hpp"

namespace growthlab {

/// Declared attributes that cannot be computed from a finite truncation.
struct FunctionMeta {
  std::optional<double> order;
  std::optional<int> genus;
  bool fabry_gap = false;
  bool tsim_logM = false;
  bool multiply_connected_fatou = false;
};

enum class ZeroKind { Explicit, BakerRule };

/// Zeros of a canonical product, stored in log form because rule-generated
/// sequences grow far beyond double range.
struct ZeroSequence {
  ZeroKind kind = ZeroKind::Explicit;
  std::vector<LogComplex> zeros;
  double baker_C = 0.0;  // BakerRule only
  std::vector<std::string> warnings;

  static ZeroSequence explicit_zeros(const std::vector<cplx>& points) {
    ZeroSequence s;
    for (cplx p : points) {
      if (p == cplx(0.0, 0.0)) throw DomainError("zero sequence: |a_k| must be positive");
      s.zeros.push_back(LogComplex::from_complex(p));
    }
    return s;
  }

  std::size_t size() const { return zeros.size(); }

  /// log|a_k| for every zero.
  std::vector<double> log_moduli() const {
    std::vector<double> out;
    out.reserve(zeros.size());
    for (const auto& z : zeros) out.push_back(z.logmod);
    return out;
  }
};

class EntireFunction;

struct PolyNode {
  std::vector<cplx> coeffs;  // ascending degree
};
struct ExpNode {
  std::vector<cplx> poly;  // exponent polynomial, ascending degree
};
struct ProductNode {
  ZeroSequence zeros;
  int genus = 0;
  std::size_t truncation = 1;
};
struct GapTerm {
  std::uint64_t exponent;
  cplx coeff;
};
struct GapSeriesNode {
  std::vector<GapTerm> terms;
  std::size_t truncation = 0;
};
struct SumNode;
struct ProdNode;
struct ScaleNode;
struct NegateNode;

struct Node;

class EntireFunction {
 public:
  EntireFunction() = default;
  explicit EntireFunction(std::shared_ptr<const Node> n, FunctionMeta m = {}) : meta(m), node_(std::move(n)) {}

  const Node& node() const { return *node_; }
  bool valid() const { return static_cast<bool>(node_); }

  FunctionMeta meta;

 private:
  std::shared_ptr<const Node> node_;
};

struct SumNode {
  std::vector<EntireFunction> parts;
};
struct ProdNode {
  std::vector<EntireFunction> parts;
};
struct ScaleNode {
  cplx factor;
  EntireFunction inner;
};
struct NegateNode {
  EntireFunction inner;
};

struct Node {
  std::variant<PolyNode, ExpNode, ProductNode, GapSeriesNode, SumNode, ProdNode, ScaleNode, NegateNode> v;
};

// ---------------------------------------------------------------------------
// Construction

namespace detail {
inline EntireFunction make(Node n) { return EntireFunction(std::make_shared<const Node>(std::move(n))); }

inline void check_finite(const std::vector<cplx>& c, const char* what) {
  for (cplx x : c)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw DomainError(std::string(what) + ": coefficients must be finite");
}
}  // namespace detail

inline EntireFunction poly(std::vector<cplx> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  detail::check_finite(coeffs, "poly");
  return detail::make({PolyNode{std::move(coeffs)}});
}

inline EntireFunction exp_poly(std::vector<cplx> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  detail::check_finite(coeffs, "exp");
  return detail::make({ExpNode{std::move(coeffs)}});
}

inline EntireFunction product(ZeroSequence zeros, int genus, std::size_t truncation = 0) {
  if (genus < 0) throw DomainError("product: genus must be >= 0");
  if (zeros.size() == 0) throw DomainError("product: empty zero sequence");
  if (truncation == 0) truncation = zeros.size();
  if (truncation < 1) throw DomainError("product: truncation must be >= 1");
  return detail::make({ProductNode{std::move(zeros), genus, truncation}});
}

inline EntireFunction gap_series(std::vector<GapTerm> terms, std::size_t truncation = 0) {
  if (terms.empty()) throw DomainError("gapseries: no terms");
  for (std::size_t i = 1; i < terms.size(); ++i)
    if (terms[i].exponent <= terms[i - 1].exponent) throw DomainError("gapseries: exponents must be strictly increasing");
  for (const auto& t : terms)
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag())) throw DomainError("gapseries: coefficients must be finite");
  if (truncation == 0) truncation = terms.size();
  return detail::make({GapSeriesNode{std::move(terms), truncation}});
}

inline EntireFunction sum(std::vector<EntireFunction> parts) {
  if (parts.empty()) throw DomainError("sum: no parts");
  return detail::make({SumNode{std::move(parts)}});
}

inline EntireFunction prod(std::vector<EntireFunction> parts) {
  if (parts.empty()) throw DomainError("prod: no parts");
  return detail::make({ProdNode{std::move(parts)}});
}

inline EntireFunction scale(cplx c, EntireFunction f) { return detail::make({ScaleNode{c, std::move(f)}}); }

inline EntireFunction negate(EntireFunction f) { return detail::make({NegateNode{std::move(f)}}); }

inline EntireFunction with_meta(EntireFunction f, FunctionMeta m) {
  f.meta = m;
  return f;
}

// ---------------------------------------------------------------------------
// Polynomial helpers

inline int poly_degree(const std::vector<cplx>& c) {
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
    if (c[k] != cplx(0.0, 0.0)) return k;
  return -1;
}

inline std::vector<cplx> poly_derivative(const std::vector<cplx>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<cplx> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<double>(k);
  return d;
}

inline cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx acc{0.0, 0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

/// Polynomial value in log form; switches to a term-wise log-sum when the
/// powers of |z| would leave double range.
inline LogComplex poly_log(const std::vector<cplx>& c, cplx z) {
  const int deg = poly_degree(c);
  if (deg < 0) return LogComplex::zero();
  if (z == cplx(0.0, 0.0)) return LogComplex::from_complex(c[0]);
  const double lz = std::log(std::abs(z));
  double maxc = kNegInf;
  for (cplx x : c)
    if (x != cplx(0.0, 0.0)) maxc = std::max(maxc, std::log(std::abs(x)));
  if (deg * std::abs(lz) + std::abs(maxc) < 600.0) return LogComplex::from_complex(horner(c, z));
  const double az = std::arg(z);
  std::vector<LogComplex> terms;
  terms.reserve(deg + 1);
  for (int k = 0; k <= deg; ++k) {
    if (c[k] == cplx(0.0, 0.0)) continue;
    terms.push_back({std::log(std::abs(c[k])) + k * lz, std::arg(c[k]) + k * az});
  }
  return log_sum(terms);
}

// ---------------------------------------------------------------------------
// Weierstrass primary factors E_p(u) = (1-u) exp(u + u^2/2 + ... + u^p/p)

namespace detail {

/// Complex logarithm of E_p(u) for u given in log form.
inline cplx log_primary_factor(const LogComplex& u, int p) {
  if (u.is_zero()) return {0.0, 0.0};
  if (u.logmod < std::log(0.5)) {
    // -sum_{j>p} u^j / j, accurate for small |u|
    const cplx uc = u.to_complex();
    cplx pw = std::pow(uc, p + 1);
    cplx s{0.0, 0.0};
    for (int j = p + 1; j < p + 200; ++j) {
      const cplx t = pw / static_cast<double>(j);
      s -= t;
      if (std::abs(t) <= 1e-18 * std::abs(s) || t == cplx(0.0, 0.0)) break;
      pw *= uc;
    }
    return s;
  }
  if (p == 0 && u.logmod > 600.0) {
    // log(1-u) = log(-u) + log(1 - 1/u), the second term negligible
    return {u.logmod, normalize_arg(u.arg + kPi)};
  }
  const cplx uc = u.to_complex();
  cplx s = std::log(cplx(1.0, 0.0) - uc);
  cplx pw{1.0, 0.0};
  for (int j = 1; j <= p; ++j) {
    pw *= uc;
    s += pw / static_cast<double>(j);
  }
  return s;
}

/// d/du log E_p(u) = -u^p / (1-u).
inline cplx dlog_primary_factor(const LogComplex& u, int p) {
  if (u.is_zero()) return p == 0 ? cplx(-1.0, 0.0) : cplx(0.0, 0.0);
  const cplx uc = u.to_complex();
  return -std::pow(uc, p) / (cplx(1.0, 0.0) - uc);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Evaluation

/// Value and first derivative, both in log form.
struct Jet {
  LogComplex value;
  LogComplex deriv;
};

inline Jet eval_jet(const EntireFunction& f, cplx z);

namespace detail {

inline Jet jet_poly(const PolyNode& n, cplx z) { return {poly_log(n.coeffs, z), poly_log(poly_derivative(n.coeffs), z)}; }

inline Jet jet_exp(const ExpNode& n, cplx z) {
  const LogComplex v = LogComplex::exp_of(horner(n.poly, z));
  return {v, v * poly_log(poly_derivative(n.poly), z)};
}

inline Jet jet_product(const ProductNode& n, cplx z) {
  const std::size_t count = std::min(n.truncation, n.zeros.size());
  const LogComplex lz = LogComplex::from_complex(z);
  cplx logval{0.0, 0.0};
  cplx dlog{0.0, 0.0};
  std::optional<std::size_t> hit;  // z sits exactly on a zero
  for (std::size_t k = 0; k < count; ++k) {
    const LogComplex& a = n.zeros.zeros[k];
    const LogComplex u = lz / a;
    if (!u.is_zero() && u.to_complex() == cplx(1.0, 0.0)) {
      hit = k;
      continue;
    }
    logval += log_primary_factor(u, n.genus);
    // (1/a) * d/du log E_p(u)
    dlog += dlog_primary_factor(u, n.genus) * std::polar(std::exp(-a.logmod), -a.arg);
  }
  if (hit) {
    // f(z) = 0; f'(z) = E_p'(1)/a * prod_{j != k} E_p(z/a_j), E_p'(1) = -exp(1 + 1/2 + ... + 1/p)
    double h = 0.0;
    for (int j = 1; j <= n.genus; ++j) h += 1.0 / j;
    const LogComplex& a = n.zeros.zeros[*hit];
    const LogComplex others = LogComplex::exp_of(logval);
    return {LogComplex::zero(), others * LogComplex::from_polar_log(h - a.logmod, kPi - a.arg)};
  }
  const LogComplex v = LogComplex::exp_of(logval);
  return {v, v * LogComplex::from_complex(dlog)};
}

inline Jet jet_gap(const GapSeriesNode& n, cplx z) {
  const std::size_t count = std::min(n.truncation, n.terms.size());
  if (z == cplx(0.0, 0.0)) {
    Jet j;
    for (std::size_t k = 0; k < count; ++k) {
      if (n.terms[k].exponent == 0) j.value = LogComplex::from_complex(n.terms[k].coeff);
      if (n.terms[k].exponent == 1) j.deriv = LogComplex::from_complex(n.terms[k].coeff);
    }
    return j;
  }
  const double lz = std::log(std::abs(z));
  const double az = std::arg(z);
  std::vector<LogComplex> vals, ders;
  vals.reserve(count);
  ders.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto& t = n.terms[k];
    if (t.coeff == cplx(0.0, 0.0)) continue;
    const double lam = static_cast<double>(t.exponent);
    const double lc = std::log(std::abs(t.coeff));
    const double ac = std::arg(t.coeff);
    vals.push_back({lc + lam * lz, ac + lam * az});
    if (t.exponent > 0) ders.push_back({lc + std::log(lam) + (lam - 1.0) * lz, ac + (lam - 1.0) * az});
  }
  return {log_sum(vals), log_sum(ders)};
}

inline Jet jet_sum(const SumNode& n, cplx z) {
  std::vector<LogComplex> vals, ders;
  for (const auto& p : n.parts) {
    const Jet j = eval_jet(p, z);
    vals.push_back(j.value);
    ders.push_back(j.deriv);
  }
  return {log_sum(vals), log_sum(ders)};
}

inline Jet jet_prod(const ProdNode& n, cplx z) {
  std::vector<Jet> js;
  js.reserve(n.parts.size());
  for (const auto& p : n.parts) js.push_back(eval_jet(p, z));
  LogComplex v = LogComplex::one();
  for (const auto& j : js) v = v * j.value;
  std::vector<LogComplex> terms;
  for (std::size_t i = 0; i < js.size(); ++i) {
    LogComplex t = js[i].deriv;
    for (std::size_t k = 0; k < js.size(); ++k)
      if (k != i) t = t * js[k].value;
    terms.push_back(t);
  }
  return {v, log_sum(terms)};
}

}  // namespace detail

inline Jet eval_jet(const EntireFunction& f, cplx z) {
  return std::visit(
      [&](const auto& n) -> Jet {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PolyNode>) return detail::jet_poly(n, z);
        else if constexpr (std::is_same_v<T, ExpNode>) return detail::jet_exp(n, z);
        else if constexpr (std::is_same_v<T, ProductNode>) return detail::jet_product(n, z);
        else if constexpr (std::is_same_v<T, GapSeriesNode>) return detail::jet_gap(n, z);
        else if constexpr (std::is_same_v<T, SumNode>) return detail::jet_sum(n, z);
        else if constexpr (std::is_same_v<T, ProdNode>) return detail::jet_prod(n, z);
        else if constexpr (std::is_same_v<T, ScaleNode>) {
          const Jet j = eval_jet(n.inner, z);
          const LogComplex c = LogComplex::from_complex(n.factor);
          return {j.value * c, j.deriv * c};
        } else {
          const Jet j = eval_jet(n.inner, z);
          return {-j.value, -j.deriv};
        }
      },
      f.node().v);
}

/// f(z) in log form. Sums are combined by complex log-sum-exp.
inline LogComplex eval_log(const EntireFunction& f, cplx z) {
  const Node& n = f.node();
  // cheap paths that skip derivative work
  if (const auto* p = std::get_if<PolyNode>(&n.v)) return poly_log(p->coeffs, z);
  if (const auto* e = std::get_if<ExpNode>(&n.v)) return LogComplex::exp_of(horner(e->poly, z));
  if (const auto* s = std::get_if<SumNode>(&n.v)) {
    std::vector<LogComplex> vals;
    for (const auto& part : s->parts) vals.push_back(eval_log(part, z));
    return log_sum(vals);
  }
  if (const auto* pr = std::get_if<ProdNode>(&n.v)) {
    LogComplex v = LogComplex::one();
    for (const auto& part : pr->parts) v = v * eval_log(part, z);
    return v;
  }
  if (const auto* sc = std::get_if<ScaleNode>(&n.v)) return eval_log(sc->inner, z) * sc->factor;
  if (const auto* ng = std::get_if<NegateNode>(&n.v)) return -eval_log(ng->inner, z);
  return eval_jet(f, z).value;
}

/// f'(z)/f(z). Throws DomainError at a zero of f.
inline cplx eval_logderiv(const EntireFunction& f, cplx z) {
  const Node& n = f.node();
  if (const auto* e = std::get_if<ExpNode>(&n.v)) return horner(poly_derivative(e->poly), z);
  const Jet j = eval_jet(f, z);
  if (j.value.is_zero())
    throw DomainError("eval_logderiv: f vanishes at z = (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")");
  return ratio(j.deriv, j.value);
}

// ---------------------------------------------------------------------------
// Symbolic derivative

inline EntireFunction derivative(const EntireFunction& f);

namespace detail {

/// d/dz E_p(z/a) as a node: (-1/a) (z/a)^p exp(z/a + ... + (z/a)^p/p).
inline EntireFunction primary_factor_derivative(cplx a, int p) {
  std::vector<cplx> lead(p + 1, 0.0);
  lead[p] = -std::pow(1.0 / a, p + 1);
  if (p == 0) return poly(lead);
  std::vector<cplx> ex(p + 1, 0.0);
  for (int j = 1; j <= p; ++j) ex[j] = std::pow(1.0 / a, j) / static_cast<double>(j);
  return prod({poly(lead), exp_poly(ex)});
}

}  // namespace detail

/// Closed-form derivative. Products over rule-generated zeros have no closed
/// form here and throw NoClosedForm.
inline EntireFunction derivative(const EntireFunction& f) {
  return std::visit(
      [&](const auto& n) -> EntireFunction {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PolyNode>) {
          return poly(poly_derivative(n.coeffs));
        } else if constexpr (std::is_same_v<T, ExpNode>) {
          return prod({poly(poly_derivative(n.poly)), exp_poly(n.poly)});
        } else if constexpr (std::is_same_v<T, GapSeriesNode>) {
          std::vector<GapTerm> d;
          const std::size_t count = std::min(n.truncation, n.terms.size());
          for (std::size_t k = 0; k < count; ++k)
            if (n.terms[k].exponent > 0) d.push_back({n.terms[k].exponent - 1, n.terms[k].coeff * static_cast<double>(n.terms[k].exponent)});
          if (d.empty()) return poly({0.0});
          return gap_series(std::move(d));
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          if (n.zeros.kind != ZeroKind::Explicit) throw NoClosedForm("derivative: product over rule-generated zeros has no closed form");
          const std::size_t count = std::min(n.truncation, n.zeros.size());
          std::vector<EntireFunction> terms;
          for (std::size_t k = 0; k < count; ++k) {
            const EntireFunction dk = detail::primary_factor_derivative(n.zeros.zeros[k].to_complex(), n.genus);
            if (count == 1) {
              terms.push_back(dk);
              continue;
            }
            ZeroSequence rest;
            for (std::size_t j = 0; j < count; ++j)
              if (j != k) rest.zeros.push_back(n.zeros.zeros[j]);
            terms.push_back(prod({dk, product(std::move(rest), n.genus)}));
          }
          return terms.size() == 1 ? terms[0] : sum(std::move(terms));
        } else if constexpr (std::is_same_v<T, SumNode>) {
          std::vector<EntireFunction> d;
          for (const auto& p : n.parts) d.push_back(derivative(p));
          return sum(std::move(d));
        } else if constexpr (std::is_same_v<T, ProdNode>) {
          std::vector<EntireFunction> terms;
          for (std::size_t i = 0; i < n.parts.size(); ++i) {
            std::vector<EntireFunction> factors = n.parts;
            factors[i] = derivative(n.parts[i]);
            terms.push_back(prod(std::move(factors)));
          }
          return terms.size() == 1 ? terms[0] : sum(std::move(terms));
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          return scale(n.factor, derivative(n.inner));
        } else {
          return negate(derivative(n.inner));
        }
      },
      f.node().v);
}

// ---------------------------------------------------------------------------
// Taylor coefficients at the origin

namespace detail {

/// Coefficients of exp(g) given the coefficients of g (g[0] is used for the constant).
inline std::vector<cplx> exp_series(const std::vector<cplx>& g, std::size_t n) {
  std::vector<cplx> out(n, 0.0);
  if (n == 0) return out;
  out[0] = std::exp(g.empty() ? cplx(0.0) : g[0]);
  for (std::size_t m = 0; m + 1 < n; ++m) {
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k <= m; ++k)
      if (k + 1 < g.size() && g[k + 1] != cplx(0.0, 0.0)) acc += static_cast<double>(k + 1) * g[k + 1] * out[m - k];
    out[m + 1] = acc / static_cast<double>(m + 1);
  }
  return out;
}

}  // namespace detail

/// First n Taylor coefficients of f at 0. Structural zeros come out exactly 0.
inline std::vector<cplx> taylor_coefficients(const EntireFunction& f, std::size_t n) {
  return std::visit(
      [&](const auto& nd) -> std::vector<cplx> {
        using T = std::decay_t<decltype(nd)>;
        std::vector<cplx> out(n, 0.0);
        if constexpr (std::is_same_v<T, PolyNode>) {
          for (std::size_t k = 0; k < std::min(n, nd.coeffs.size()); ++k) out[k] = nd.coeffs[k];
        } else if constexpr (std::is_same_v<T, ExpNode>) {
          out = detail::exp_series(nd.poly, n);
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          std::vector<cplx> g(n, 0.0);
          const std::size_t count = std::min(nd.truncation, nd.zeros.size());
          for (std::size_t j = nd.genus + 1; j < n; ++j)
            for (std::size_t k = 0; k < count; ++k) {
              const auto& a = nd.zeros.zeros[k];
              g[j] -= std::polar(std::exp(-static_cast<double>(j) * a.logmod), -static_cast<double>(j) * a.arg) / static_cast<double>(j);
            }
          out = detail::exp_series(g, n);
        } else if constexpr (std::is_same_v<T, GapSeriesNode>) {
          const std::size_t count = std::min(nd.truncation, nd.terms.size());
          for (std::size_t k = 0; k < count; ++k)
            if (nd.terms[k].exponent < n) out[nd.terms[k].exponent] = nd.terms[k].coeff;
        } else if constexpr (std::is_same_v<T, SumNode>) {
          for (const auto& p : nd.parts) {
            const auto c = taylor_coefficients(p, n);
            for (std::size_t k = 0; k < n; ++k) out[k] += c[k];
          }
        } else if constexpr (std::is_same_v<T, ProdNode>) {
          out.assign(n, 0.0);
          out[0] = 1.0;
          for (const auto& p : nd.parts) {
            const auto c = taylor_coefficients(p, n);
            std::vector<cplx> next(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
              if (out[i] != cplx(0.0, 0.0))
                for (std::size_t j = 0; i + j < n; ++j) next[i + j] += out[i] * c[j];
            out = std::move(next);
          }
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          out = taylor_coefficients(nd.inner, n);
          for (auto& c : out) c *= nd.factor;
        } else {
          out = taylor_coefficients(nd.inner, n);
          for (auto& c : out) c = -c;
        }
        return out;
      },
      f.node().v);
}

// ---------------------------------------------------------------------------
// Structural queries

/// True when the tree models a transcendental function: a non-constant
/// exponential, a rule-generated or genus >= 1 product, or a gap series (whose
/// finite truncation stands in for the infinite series).
inline bool models_transcendental(const EntireFunction& f) {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PolyNode>) return false;
        else if constexpr (std::is_same_v<T, ExpNode>) return poly_degree(n.poly) >= 1;
        else if constexpr (std::is_same_v<T, ProductNode>) return n.zeros.kind == ZeroKind::BakerRule || n.genus > 0;
        else if constexpr (std::is_same_v<T, GapSeriesNode>) return true;
        else if constexpr (std::is_same_v<T, SumNode> || std::is_same_v<T, ProdNode>) {
          for (const auto& p : n.parts)
            if (models_transcendental(p)) return true;
          return false;
        } else
          return models_transcendental(n.inner);
      },
      f.node().v);
}

/// Decomposition f = h * exp(P) when the tree exposes a single exponential factor.
struct ExpFactorization {
  EntireFunction h;  // may be a constant polynomial
  std::vector<cplx> P;
};

inline std::optional<ExpFactorization> split_exp_factor(const EntireFunction& f) {
  const Node& n = f.node();
  if (const auto* e = std::get_if<ExpNode>(&n.v)) return ExpFactorization{poly({1.0}), e->poly};
  if (const auto* sc = std::get_if<ScaleNode>(&n.v)) {
    auto inner = split_exp_factor(sc->inner);
    if (!inner) return std::nullopt;
    inner->h = scale(sc->factor, inner->h);
    return inner;
  }
  if (const auto* ng = std::get_if<NegateNode>(&n.v)) {
    auto inner = split_exp_factor(ng->inner);
    if (!inner) return std::nullopt;
    inner->h = negate(inner->h);
    return inner;
  }
  if (const auto* pr = std::get_if<ProdNode>(&n.v)) {
    std::optional<std::vector<cplx>> P;
    std::vector<EntireFunction> rest;
    for (const auto& part : pr->parts) {
      if (const auto* e = std::get_if<ExpNode>(&part.node().v); e && !P) {
        P = e->poly;
      } else {
        rest.push_back(part);
      }
    }
    if (!P) return std::nullopt;
    EntireFunction h = rest.empty() ? poly({1.0}) : (rest.size() == 1 ? rest[0] : prod(rest));
    return ExpFactorization{h, *P};
  }
  return std::nullopt;
}

/// Zeros of f when they are structurally known: polynomial roots are not
/// computed, only canonical-product zero sequences are collected.
inline std::vector<LogComplex> collect_product_zeros(const EntireFunction& f) {
  std::vector<LogComplex> out;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ProductNode>) {
          const std::size_t count = std::min(n.truncation, n.zeros.size());
          out.insert(out.end(), n.zeros.zeros.begin(), n.zeros.zeros.begin() + count);
        } else if constexpr (std::is_same_v<T, ProdNode>) {
          for (const auto& p : n.parts) {
            auto z = collect_product_zeros(p);
            out.insert(out.end(), z.begin(), z.end());
          }
        } else if constexpr (std::is_same_v<T, ScaleNode> || std::is_same_v<T, NegateNode>) {
          out = collect_product_zeros(n.inner);
        }
      },
      f.node().v);
  return out;
}

// ---------------------------------------------------------------------------
// Rule-generated zero sequence

/// Zeros -a_n of prod(1 + z/a_n) with a_1 = 2 and a_{n+1} = 0.75 A_n(a_n), where
/// A_n(z) = C z^2 prod_{k<=n}(1 + z/a_k). The a_n are kept in log form.
inline ZeroSequence baker_zeros(double C, int N) {
  if (!(C > 0) || N < 1) throw DomainError("baker_zeros: need C > 0 and N >= 1");
  ZeroSequence seq;
  seq.kind = ZeroKind::BakerRule;
  seq.baker_C = C;
  std::vector<double> loga{std::log(2.0)};
  const double log_pick = std::log(0.75);
  while (static_cast<int>(loga.size()) < N) {
    const double la = loga.back();
    // log A_n(a_n) = log C + 2 log a_n + sum_k log(1 + a_n/a_k)
    double logA = std::log(C) + 2.0 * la;
    for (double lk : loga) logA += softplus(la - lk);
    const double next = logA + log_pick;
    if (!std::isfinite(next)) {
      seq.warnings.push_back("baker_zeros: a_" + std::to_string(loga.size() + 1) + " exceeds representable log-modulus; truncated");
      break;
    }
    // a_{n+1} must sit in (A_n(a_n)/2, A_n(a_n)) and exceed 2 a_n
    if (!(next > logA - std::log(2.0) && next < logA)) throw NumericalError("baker_zeros: interval constraint violated");
    if (!(next > la + std::log(2.0))) throw NumericalError("baker_zeros: growth constraint a_{n+1} > 2 a_n violated");
    loga.push_back(next);
  }
  for (double la : loga) seq.zeros.push_back({la, kPi});
  return seq;
}

/// log a_n for a rule-generated sequence (the zeros sit at -a_n).
inline std::vector<double> baker_log_terms(const ZeroSequence& s) { return s.log_moduli(); }

}  // namespace growthlab
