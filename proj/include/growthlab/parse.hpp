#pragma once

// Recursive-descent parser for the function-spec mini-language:
//
//   fn   := poly(c, ...) | exp(fn) | prodlist(a, ... ; genus) | baker(C, N)
//         | gapseries(l:c, ...) | sum(fn, ...) | prod(fn, ...)
//         | scale(c, fn) | neg(fn)
//   c    := float | (float, float)
//   spec := fn [ @{order=rho, genus=p, fabry_gap, tsim_logM, mcf} ]
//
// prodlist(a_1, ..., a_m; p) is prod_k E_p(-z/a_k), i.e. (1 + z/a_k) factors
// for p = 0. baker(C, N) is prod_{n<=N} (1 + z/a_n) over the rule-generated
// sequence. gapseries terms may be wrapped in parentheses: gapseries((1:1),(4:1)).

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <variant>

#include "growthlab/entire_function.hpp"

namespace growthlab {

namespace detail {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : s_(text) {}

  EntireFunction parse_all() {
    EntireFunction f = parse_fn();
    skip_ws();
    if (peek() == '@') f.meta = parse_meta();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
    return f;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) throw ParseError("expected identifier", start);
    return std::string(s_.substr(start, pos_ - start));
  }

  double number() {
    skip_ws();
    const std::size_t start = pos_;
    double v = 0.0;
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    if (peek() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first) throw ParseError("expected number", start);
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    if (!std::isfinite(v)) throw ParseError("number is not finite", start);
    return v;
  }

  std::uint64_t integer() {
    skip_ws();
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == s_.data() + pos_) throw ParseError("expected non-negative integer", start);
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  cplx coefficient() {
    skip_ws();
    if (peek() == '(') {
      ++pos_;
      const double re = number();
      expect(',');
      const double im = number();
      expect(')');
      return {re, im};
    }
    return {number(), 0.0};
  }

  GapTerm gap_term() {
    skip_ws();
    const bool wrapped = accept('(');
    const std::uint64_t lam = integer();
    expect(':');
    const cplx c = coefficient();
    if (wrapped) expect(')');
    return {lam, c};
  }

  std::vector<cplx> as_poly_coeffs(const EntireFunction& f, std::size_t at) {
    const Node& n = f.node();
    if (const auto* p = std::get_if<PolyNode>(&n.v)) return p->coeffs;
    if (const auto* sc = std::get_if<ScaleNode>(&n.v)) {
      auto c = as_poly_coeffs(sc->inner, at);
      for (auto& x : c) x *= sc->factor;
      return c;
    }
    if (const auto* ng = std::get_if<NegateNode>(&n.v)) {
      auto c = as_poly_coeffs(ng->inner, at);
      for (auto& x : c) x = -x;
      return c;
    }
    throw ParseError("semantic error: exp() argument must be a polynomial", at);
  }

  EntireFunction parse_fn() {
    skip_ws();
    const std::size_t start = pos_;
    const std::string name = identifier();
    expect('(');
    try {
      if (name == "poly") {
        std::vector<cplx> c{coefficient()};
        while (accept(',')) c.push_back(coefficient());
        expect(')');
        return poly(std::move(c));
      }
      if (name == "exp") {
        const std::size_t arg_at = pos_;
        EntireFunction inner = parse_fn();
        expect(')');
        return exp_poly(as_poly_coeffs(inner, arg_at));
      }
      if (name == "prodlist") {
        std::vector<cplx> zeros;
        do {
          const std::size_t at = pos_;
          const cplx a = coefficient();
          if (a == cplx(0.0, 0.0)) throw ParseError("semantic error: product term must be nonzero", at);
          zeros.push_back(-a);
        } while (accept(','));
        expect(';');
        const std::uint64_t genus = integer();
        expect(')');
        return product(ZeroSequence::explicit_zeros(zeros), static_cast<int>(genus));
      }
      if (name == "baker") {
        const std::size_t at = pos_;
        const double C = number();
        expect(',');
        const std::uint64_t N = integer();
        expect(')');
        if (!(C > 0) || N < 1) throw ParseError("semantic error: baker(C, N) needs C > 0 and N >= 1", at);
        return product(baker_zeros(C, static_cast<int>(N)), 0);
      }
      if (name == "gapseries") {
        const std::size_t at = pos_;
        std::vector<GapTerm> terms{gap_term()};
        while (accept(',')) terms.push_back(gap_term());
        expect(')');
        for (std::size_t i = 1; i < terms.size(); ++i)
          if (terms[i].exponent <= terms[i - 1].exponent) throw ParseError("semantic error: gap exponents must be strictly increasing", at);
        return gap_series(std::move(terms));
      }
      if (name == "sum" || name == "prod") {
        std::vector<EntireFunction> parts{parse_fn()};
        while (accept(',')) parts.push_back(parse_fn());
        expect(')');
        return name == "sum" ? sum(std::move(parts)) : prod(std::move(parts));
      }
      if (name == "scale") {
        const cplx c = coefficient();
        expect(',');
        EntireFunction inner = parse_fn();
        expect(')');
        return scale(c, std::move(inner));
      }
      if (name == "neg") {
        EntireFunction inner = parse_fn();
        expect(')');
        return negate(std::move(inner));
      }
    } catch (const DomainError& e) {
      throw ParseError(std::string("semantic error: ") + e.what(), start);
    }
    throw ParseError("unknown function '" + name + "'", start);
  }

  FunctionMeta parse_meta() {
    expect('@');
    expect('{');
    FunctionMeta m;
    if (accept('}')) return m;
    do {
      const std::size_t at = pos_;
      const std::string key = identifier();
      if (key == "order") {
        expect('=');
        m.order = number();
      } else if (key == "genus") {
        expect('=');
        m.genus = static_cast<int>(integer());
      } else if (key == "fabry_gap") {
        m.fabry_gap = true;
      } else if (key == "tsim_logM") {
        m.tsim_logM = true;
      } else if (key == "mcf") {
        m.multiply_connected_fatou = true;
      } else {
        throw ParseError("unknown metadata key '" + key + "'", at);
      }
    } while (accept(','));
    expect('}');
    return m;
  }
};

}  // namespace detail

/// Parses a function spec. Throws ParseError carrying the byte offset.
inline EntireFunction parse_spec(std::string_view text) { return detail::SpecParser(text).parse_all(); }

}  // namespace growthlab
