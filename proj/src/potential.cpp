#include "tomolab/potential.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace tomolab {

int Monomial::degree() const {
  int d = 0;
  for (int e : exponents) d += e;
  return d;
}

PolynomialPotential::PolynomialPotential(std::size_t modes) : PolynomialPotential(modes, {}) {}

PolynomialPotential::PolynomialPotential(std::size_t modes, std::vector<Monomial> monomials,
                                         std::vector<ModeConstants> constants)
    : modes_(modes), constants_(std::move(constants)) {
  if (modes_ == 0) throw DomainError("potential needs at least one mode");
  if (constants_.empty()) constants_.assign(modes_, ModeConstants{});
  if (constants_.size() != modes_) throw DomainError("potential: one set of mode constants per mode");
  for (auto& m : monomials) add(std::move(m));
  validate();
}

void PolynomialPotential::validate() const {
  for (const auto& c : constants_) c.validate();
  for (const auto& c : constants_)
    if (std::abs(c.hbar - constants_[0].hbar) > 1e-15 * constants_[0].hbar)
      throw DomainError("all modes must share the same hbar");
}

PolynomialPotential& PolynomialPotential::add(Monomial m) {
  if (m.exponents.size() != modes_) throw DomainError("monomial has the wrong number of modes");
  for (int e : m.exponents)
    if (e < 0) throw DomainError("negative exponent in potential");
  if (m.degree() > kMaxDegree) throw DomainError("potential degree above 4 is unsupported");
  if (!std::isfinite(m.coefficient)) throw DomainError("potential coefficient must be finite");
  for (auto it = monomials_.begin(); it != monomials_.end(); ++it)
    if (it->exponents == m.exponents) {
      it->coefficient += m.coefficient;
      if (it->coefficient == 0.0) monomials_.erase(it);
      return *this;
    }
  if (m.coefficient != 0.0) monomials_.push_back(std::move(m));
  return *this;
}

PolynomialPotential PolynomialPotential::widened(std::size_t modes) const {
  if (modes < modes_) throw DomainError("cannot narrow a potential");
  std::vector<Monomial> ms = monomials_;
  for (auto& m : ms) m.exponents.resize(modes, 0);
  std::vector<ModeConstants> cs = constants_;
  cs.resize(modes, constants_.back());
  return PolynomialPotential(modes, std::move(ms), std::move(cs));
}

int PolynomialPotential::degree() const {
  int d = 0;
  for (const auto& m : monomials_) d = std::max(d, m.degree());
  return d;
}

double PolynomialPotential::hbar() const { return constants_[0].hbar; }

double PolynomialPotential::operator()(std::span<const double> q) const {
  double u = 0.0;
  for (const auto& m : monomials_) {
    double t = m.coefficient;
    for (std::size_t s = 0; s < modes_; ++s) t *= std::pow(q[s], m.exponents[s]);
    u += t;
  }
  return u;
}

std::string PolynomialPotential::to_string() const {
  if (monomials_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& m : monomials_) {
    if (!first) os << (m.coefficient < 0 ? " - " : " + ");
    else if (m.coefficient < 0) os << "-";
    first = false;
    os << std::abs(m.coefficient);
    for (std::size_t s = 0; s < modes_; ++s) {
      if (m.exponents[s] == 0) continue;
      os << "*q" << s + 1;
      if (m.exponents[s] > 1) os << "^" << m.exponents[s];
    }
  }
  return os.str();
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  std::vector<std::pair<std::map<std::size_t, int>, double>> terms() {
    std::vector<std::pair<std::map<std::size_t, int>, double>> out;
    skip();
    if (at_end()) fail("empty potential");
    bool first = true;
    while (!at_end()) {
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = get() == '-' ? -1.0 : 1.0;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      out.push_back(term(sign));
      skip();
    }
    return out;
  }

 private:
  std::pair<std::map<std::size_t, int>, double> term(double coef) {
    std::map<std::size_t, int> ex;
    factor(ex, coef);
    skip();
    while (!at_end() && (peek() == '*' || peek() == '/')) {
      const char op = get();
      skip();
      if (op == '/') {
        const double d = number();
        if (d == 0.0) fail("division by zero");
        coef /= d;
      } else {
        factor(ex, coef);
      }
      skip();
    }
    return {ex, coef};
  }

  void factor(std::map<std::size_t, int>& ex, double& coef) {
    if (peek() == 'q') {
      get();
      std::size_t mode = 1;
      if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) mode = static_cast<std::size_t>(integer());
      if (mode == 0) fail("modes are numbered from 1");
      int power = 1;
      skip();
      if (!at_end() && peek() == '^') {
        get();
        skip();
        power = integer();
      }
      ex[mode - 1] += power;
      return;
    }
    coef *= number();
  }

  double number() {
    double v = 0.0;
    const char* b = s_.data() + pos_;
    auto [p, ec] = std::from_chars(b, s_.data() + s_.size(), v);
    if (ec != std::errc() || p == b) fail("expected a number");
    pos_ += static_cast<std::size_t>(p - b);
    return v;
  }

  int integer() {
    int v = 0;
    const char* b = s_.data() + pos_;
    auto [p, ec] = std::from_chars(b, s_.data() + s_.size(), v);
    if (ec != std::errc() || p == b) fail("expected an integer");
    pos_ += static_cast<std::size_t>(p - b);
    return v;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw DomainError("cannot parse potential '" + std::string(s_) + "': " + why + " at position " +
                      std::to_string(pos_));
  }

  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  char get() { return s_[pos_++]; }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

PolynomialPotential PolynomialPotential::parse(std::string_view text, std::size_t modes) {
  auto terms = Parser(text).terms();
  std::size_t needed = 1;
  for (const auto& [ex, c] : terms)
    for (const auto& [mode, p] : ex) needed = std::max(needed, mode + 1);
  if (modes == 0) modes = needed;
  if (needed > modes) throw DomainError("potential refers to more modes than the grid has");
  PolynomialPotential u(modes);
  for (const auto& [ex, c] : terms) {
    Monomial m{std::vector<int>(modes, 0), c};
    for (const auto& [mode, p] : ex) m.exponents[mode] += p;
    u.add(std::move(m));
  }
  return u;
}

int OperatorTerm::b_order() const {
  int s = 0;
  for (int b : b_powers) s += b;
  return s;
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::vector<OperatorTerm> expand_series(const PolynomialPotential& U, SeriesPart part, int max_b_order) {
  const std::size_t n = U.modes();
  const double eps = 0.5 * U.hbar();
  std::vector<OperatorTerm> out;
  for (const auto& m : U.monomials()) {
    std::vector<int> j(n, 0);
    while (true) {
      int total = 0;
      double c = m.coefficient;
      for (std::size_t s = 0; s < n; ++s) {
        total += j[s];
        c *= binomial(m.exponents[s], j[s]);
      }
      const bool odd = total % 2 == 1;
      if (total <= max_b_order && (part == SeriesPart::imaginary ? odd : !odd)) {
        // i^total = i (-1)^{(total-1)/2} for odd, (-1)^{total/2} for even
        const int half = part == SeriesPart::imaginary ? (total - 1) / 2 : total / 2;
        const double sign = half % 2 == 0 ? 1.0 : -1.0;
        const double weight = std::pow(eps, part == SeriesPart::imaginary ? total - 1 : total);
        OperatorTerm t{c * sign * weight, {}, j};
        for (std::size_t s = 0; s < n; ++s) t.a_powers.push_back(m.exponents[s] - j[s]);
        // merge with an identical operator product
        bool merged = false;
        for (auto& o : out)
          if (o.a_powers == t.a_powers && o.b_powers == t.b_powers) {
            o.coefficient += t.coefficient;
            merged = true;
            break;
          }
        if (!merged) out.push_back(std::move(t));
      }
      std::size_t s = 0;
      while (s < n && ++j[s] > m.exponents[s]) j[s++] = 0;
      if (s == n) break;
    }
  }
  return out;
}

Field apply_series(const std::vector<OperatorTerm>& terms, const Field& f, const std::vector<ModeOperators>& ops) {
  Field out(f.axes());
  out.metadata() = f.metadata();
  std::map<std::vector<int>, Field> b_cache;
  for (const auto& t : terms) {
    if (t.coefficient == 0.0) continue;
    if (t.a_powers.size() != ops.size()) throw DomainError("operator term and mode count disagree");
    auto it = b_cache.find(t.b_powers);
    if (it == b_cache.end()) {
      Field g = f;
      for (std::size_t s = 0; s < ops.size(); ++s)
        for (int k = 0; k < t.b_powers[s]; ++k) g = ops[s].B(g);
      it = b_cache.emplace(t.b_powers, std::move(g)).first;
    }
    Field g = it->second;
    for (std::size_t s = 0; s < ops.size(); ++s)
      for (int k = 0; k < t.a_powers[s]; ++k) g = ops[s].A(g);
    out.mutable_values() += t.coefficient * g.values();
  }
  return out;
}

}  // namespace tomolab
