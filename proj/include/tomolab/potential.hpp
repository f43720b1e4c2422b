#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tomolab/field.hpp"
#include "tomolab/states.hpp"

namespace tomolab {

struct Monomial {
  std::vector<int> exponents;  // one entry per mode
  double coefficient = 0.0;

  int degree() const;
};

// U(q_1, ..., q_n) as a sum of real monomials of total degree <= 4.
class PolynomialPotential {
 public:
  static constexpr int kMaxDegree = 4;

  explicit PolynomialPotential(std::size_t modes = 1);
  PolynomialPotential(std::size_t modes, std::vector<Monomial> monomials, std::vector<ModeConstants> constants = {});

  // Grammar: sum of terms like "0.5*q^2", "-q1*q2", "q2^4/4"; "q" means q1.
  static PolynomialPotential parse(std::string_view text, std::size_t modes = 0);

  std::size_t modes() const { return modes_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  const std::vector<ModeConstants>& constants() const { return constants_; }
  std::vector<ModeConstants>& constants() { return constants_; }
  const ModeConstants& constants(std::size_t mode) const { return constants_.at(mode); }

  int degree() const;
  bool is_zero() const { return monomials_.empty(); }
  double hbar() const;
  double operator()(std::span<const double> q) const;
  std::string to_string() const;

  PolynomialPotential& add(Monomial m);
  // Same polynomial with `modes` modes; existing monomials are padded with zero exponents.
  PolynomialPotential widened(std::size_t modes) const;

 private:
  void validate() const;

  std::size_t modes_;
  std::vector<Monomial> monomials_;
  std::vector<ModeConstants> constants_;
};

// One product  coefficient * prod_s A_s^{a_s} B_s^{b_s}  from expanding U(A + i (hbar/2) B).
struct OperatorTerm {
  double coefficient = 0.0;
  std::vector<int> a_powers;
  std::vector<int> b_powers;

  int b_order() const;
};

enum class SeriesPart {
  // (2/hbar) Im U(A + i hbar/2 B): terms with odd total B order, weight (hbar/2)^{|b|-1}
  imaginary,
  // Re U(A + i hbar/2 B): even total B order, weight (hbar/2)^{|b|}
  real,
};

// Expands every monomial with the binomial theorem (A and B commute within a
// mode and across modes). `max_b_order` truncates the series: 1 gives the
// classical Liouville force term.
std::vector<OperatorTerm> expand_series(const PolynomialPotential& U, SeriesPart part, int max_b_order = 1000);

struct ModeOperators {
  std::function<Field(const Field&)> A;
  std::function<Field(const Field&)> B;
};

// Sum over terms of coefficient * A^a B^b f (B applied first). Powers of B are shared between terms.
Field apply_series(const std::vector<OperatorTerm>& terms, const Field& f, const std::vector<ModeOperators>& ops);

}  // namespace tomolab
