#include "qhopf/expalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace qhopf {

namespace {

constexpr double kMergeTol = ExpPolyConfig::merge_tolerance;

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool key_less(const Term& x, const Term& y, int arity) {
  for (int j = 0; j < arity; ++j) {
    const Factor& a = x.key[j];
    const Factor& b = y.key[j];
    if (a.mu.real() != b.mu.real()) return a.mu.real() < b.mu.real();
    if (a.mu.imag() != b.mu.imag()) return a.mu.imag() < b.mu.imag();
    if (a.power != b.power) return a.power < b.power;
  }
  return false;
}

bool key_match(const Term& x, const Term& y, int arity) {
  for (int j = 0; j < arity; ++j) {
    if (x.key[j].power != y.key[j].power) return false;
    if (std::abs(x.key[j].mu - y.key[j].mu) > kMergeTol) return false;
  }
  return true;
}

cplx ipow(cplx base, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

void check_arity(int arity) {
  if (arity < 1 || arity > ExpPolyConfig::max_arity)
    throw std::invalid_argument("ExpPoly arity must be in 1..3, got " + std::to_string(arity));
}

void check_same_arity(const ExpPoly& f, const ExpPoly& g) {
  if (f.arity() != g.arity())
    throw std::invalid_argument("ExpPoly arity mismatch: " + std::to_string(f.arity()) + " vs " +
                                std::to_string(g.arity()));
}

void check_var(const ExpPoly& f, int var) {
  if (var < 0 || var >= f.arity())
    throw std::out_of_range("variable index " + std::to_string(var) + " out of range for arity " +
                            std::to_string(f.arity()));
}

}  // namespace

ExpPoly::ExpPoly(int arity) : arity_(arity) { check_arity(arity); }

ExpPoly ExpPoly::constant(int arity, cplx c) {
  Term t;
  t.coeff = c;
  return from_terms(arity, {t});
}

ExpPoly ExpPoly::monomial(int arity, int var, cplx mu, int power, cplx c) {
  check_arity(arity);
  if (var < 0 || var >= arity) throw std::out_of_range("monomial variable out of range");
  if (power < 0) throw std::invalid_argument("negative power in ExpPoly monomial");
  Term t;
  t.key[var] = Factor{mu, power};
  t.coeff = c;
  return from_terms(arity, {t});
}

ExpPoly ExpPoly::variable(int arity, int var) { return monomial(arity, var, 0.0, 1); }

ExpPoly ExpPoly::from_terms(int arity, std::vector<Term> terms, double scale) {
  ExpPoly f(arity);
  f.terms_ = std::move(terms);
  f.scale_ = scale;
  f.canonicalize(ExpPolyConfig::zero_threshold);
  return f;
}

ExpPoly ExpPoly::sum(std::span<const ExpPoly> parts) {
  if (parts.empty()) throw std::invalid_argument("ExpPoly::sum of an empty list");
  const int arity = parts.front().arity();
  std::vector<Term> all;
  double scale = 0.0;
  for (const auto& p : parts) {
    check_same_arity(parts.front(), p);
    all.insert(all.end(), p.terms_.begin(), p.terms_.end());
    scale = std::max(scale, p.scale_);
  }
  return from_terms(arity, std::move(all), scale);
}

double ExpPoly::max_coefficient() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff));
  return m;
}

void ExpPoly::canonicalize(double prune_relative) {
  for (auto& t : terms_) {
    for (int j = arity_; j < ExpPolyConfig::max_arity; ++j) t.key[j] = Factor{};
    scale_ = std::max(scale_, std::abs(t.coeff));
  }
  std::sort(terms_.begin(), terms_.end(),
            [this](const Term& x, const Term& y) { return key_less(x, y, arity_); });

  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    bool found = false;
    for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
      if (it->key[0].mu.real() < t.key[0].mu.real() - kMergeTol) break;
      if (key_match(*it, t, arity_)) {
        it->coeff += t.coeff;
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(t);
  }

  const double cut = prune_relative * scale_;
  std::erase_if(merged, [cut](const Term& t) { return !(std::abs(t.coeff) >= cut) || t.coeff == 0.0; });
  terms_ = std::move(merged);
}

ExpPoly ExpPoly::operator-() const {
  ExpPoly r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& other) {
  check_same_arity(*this, other);
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  scale_ = std::max(scale_, other.scale_);
  canonicalize(ExpPolyConfig::zero_threshold);
  return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& other) { return *this += -other; }

ExpPoly& ExpPoly::operator*=(const ExpPoly& other) {
  *this = *this * other;
  return *this;
}

ExpPoly& ExpPoly::operator*=(cplx s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= s;
  scale_ *= std::abs(s);
  return *this;
}

ExpPoly operator*(const ExpPoly& f, const ExpPoly& g) {
  check_same_arity(f, g);
  std::vector<Term> out;
  out.reserve(f.terms_.size() * g.terms_.size());
  for (const auto& x : f.terms_) {
    for (const auto& y : g.terms_) {
      Term t;
      for (int j = 0; j < f.arity_; ++j) {
        t.key[j].mu = x.key[j].mu + y.key[j].mu;
        t.key[j].power = x.key[j].power + y.key[j].power;
      }
      t.coeff = x.coeff * y.coeff;
      out.push_back(t);
    }
  }
  return ExpPoly::from_terms(f.arity_, std::move(out), f.scale_ * g.scale_);
}

bool operator==(const ExpPoly& f, const ExpPoly& g) {
  if (f.arity_ != g.arity_) return false;
  return residual(f, g) < ExpPolyConfig::zero_threshold;
}

ExpPoly combine(const ExpPoly& f, const ExpPoly& g, CombineOp op) {
  check_same_arity(f, g);
  return op == CombineOp::add ? f + g : f * g;
}

ExpPoly shift(const ExpPoly& f, int var, cplx m) {
  check_var(f, var);
  std::vector<Term> out;
  double growth = 0.0;
  for (const auto& t : f.terms()) {
    const Factor& fac = t.key[var];
    const cplx factor = std::exp(fac.mu * m);
    growth = std::max(growth, std::abs(factor));
    const cplx base = t.coeff * factor;
    for (int j = 0; j <= fac.power; ++j) {
      Term u = t;
      u.key[var].power = j;
      u.coeff = base * binomial(fac.power, j) * ipow(m, fac.power - j);
      out.push_back(u);
    }
  }
  return ExpPoly::from_terms(f.arity(), std::move(out), f.scale() * growth);
}

ExpPoly differentiate(const ExpPoly& f, int var, int order) {
  check_var(f, var);
  if (order < 0) throw std::invalid_argument("negative derivative order");
  // The history scale follows the operator norm on exponentials; polynomial
  // parts are rescaled from the fresh terms alone.
  double rho = 0.0;
  for (const auto& t : f.terms()) rho = std::max(rho, std::abs(t.key[var].mu));
  ExpPoly cur = f;
  for (int n = 0; n < order; ++n) {
    std::vector<Term> out;
    for (const auto& t : cur.terms()) {
      const Factor& fac = t.key[var];
      if (fac.mu != 0.0) {
        Term u = t;
        u.coeff *= fac.mu;
        out.push_back(u);
      }
      if (fac.power > 0) {
        Term u = t;
        u.coeff *= static_cast<double>(fac.power);
        u.key[var].power -= 1;
        out.push_back(u);
      }
    }
    cur = ExpPoly::from_terms(f.arity(), std::move(out), cur.scale() * rho);
  }
  return cur;
}

cplx evaluate(const ExpPoly& f, std::span<const cplx> point) {
  if (static_cast<int>(point.size()) != f.arity())
    throw std::invalid_argument("evaluate: expected " + std::to_string(f.arity()) + " coordinates");
  cplx total = 0.0;
  for (const auto& t : f.terms()) {
    cplx v = t.coeff;
    for (int j = 0; j < f.arity(); ++j) {
      const Factor& fac = t.key[j];
      const cplx e = fac.mu * point[j];
      if (std::abs(e.real()) > ExpPolyConfig::exponent_cap) {
        std::ostringstream msg;
        msg << "exponent overflow: |Re(mu*V)| = " << std::abs(e.real()) << " exceeds cap "
            << ExpPolyConfig::exponent_cap;
        throw OverflowError(msg.str());
      }
      if (fac.mu != 0.0) v *= std::exp(e);
      if (fac.power > 0) v *= ipow(point[j], fac.power);
    }
    total += v;
  }
  return total;
}

cplx evaluate(const ExpPoly& f, cplx v) {
  const cplx p[1] = {v};
  return evaluate(f, p);
}

ExpPoly real_axis_conjugate(const ExpPoly& f) {
  if (f.arity() != 1) throw std::invalid_argument("real_axis_conjugate requires arity 1");
  std::vector<Term> out(f.terms().begin(), f.terms().end());
  for (auto& t : out) {
    t.coeff = std::conj(t.coeff);
    t.key[0].mu = std::conj(t.key[0].mu);
  }
  return ExpPoly::from_terms(1, std::move(out), f.scale());
}

bool is_zero(const ExpPoly& f, double relative_tolerance) {
  const double cut = relative_tolerance * f.scale();
  for (const auto& t : f.terms())
    if (std::abs(t.coeff) >= cut) return false;
  return true;
}

double residual(const ExpPoly& f, const ExpPoly& g) {
  check_same_arity(f, g);
  ExpPoly d(f.arity_);
  d.terms_ = f.terms_;
  for (const auto& t : g.terms_) {
    Term u = t;
    u.coeff = -u.coeff;
    d.terms_.push_back(u);
  }
  d.canonicalize(0.0);
  const double scale = std::max(f.scale_, g.scale_);
  if (scale == 0.0) return 0.0;
  return d.max_coefficient() / scale;
}

ExpPoly substitute(const ExpPoly& f, int target_arity, std::span<const AffineForm> forms) {
  check_arity(target_arity);
  if (static_cast<int>(forms.size()) != f.arity())
    throw std::invalid_argument("substitute: one affine form per source variable required");

  // Powers of each affine form, built lazily.
  std::vector<std::vector<ExpPoly>> powers(forms.size());
  auto power_of = [&](std::size_t i, int k) -> const ExpPoly& {
    auto& list = powers[i];
    if (list.empty()) list.push_back(ExpPoly::constant(target_arity, 1.0));
    while (static_cast<int>(list.size()) <= k) {
      std::vector<Term> lin;
      for (int j = 0; j < target_arity; ++j) {
        if (forms[i].coeffs[j] == 0.0) continue;
        Term t;
        t.key[j].power = 1;
        t.coeff = forms[i].coeffs[j];
        lin.push_back(t);
      }
      if (forms[i].offset != 0.0) {
        Term t;
        t.coeff = forms[i].offset;
        lin.push_back(t);
      }
      list.push_back(list.back() * ExpPoly::from_terms(target_arity, std::move(lin)));
    }
    return list[k];
  };

  std::vector<ExpPoly> parts;
  parts.reserve(f.size() + 1);
  parts.push_back(ExpPoly::zero(target_arity));
  double growth = 0.0;
  for (const auto& t : f.terms()) {
    Term head;
    cplx exponent_offset = 0.0;
    for (int i = 0; i < f.arity(); ++i) {
      const cplx mu = t.key[i].mu;
      exponent_offset += mu * forms[i].offset;
      for (int j = 0; j < target_arity; ++j) head.key[j].mu += mu * forms[i].coeffs[j];
    }
    const cplx factor = std::exp(exponent_offset);
    growth = std::max(growth, std::abs(factor));
    head.coeff = t.coeff * factor;
    ExpPoly piece = ExpPoly::from_terms(target_arity, {head});
    for (int i = 0; i < f.arity(); ++i)
      if (t.key[i].power > 0) piece = piece * power_of(i, t.key[i].power);
    parts.push_back(std::move(piece));
  }
  parts.front().scale_ = f.scale() * growth;
  return ExpPoly::sum(parts);
}

ExpPoly relabel(const ExpPoly& f, int target_arity, std::initializer_list<int> targets) {
  std::vector<AffineForm> forms;
  for (int t : targets) forms.push_back(AffineForm::variable(t));
  return substitute(f, target_arity, forms);
}

ExpPoly lift(const ExpPoly& f, int arity, int var) {
  if (f.arity() != 1) throw std::invalid_argument("lift requires an arity-1 function");
  check_arity(arity);
  if (var < 0 || var >= arity) throw std::out_of_range("lift target variable out of range");
  std::vector<Term> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) {
    Term u;
    u.key[var] = t.key[0];
    u.coeff = t.coeff;
    out.push_back(u);
  }
  return ExpPoly::from_terms(arity, std::move(out), f.scale());
}

ExpPoly antidifference(const ExpPoly& g) {
  if (g.arity() != 1) throw std::invalid_argument("antidifference requires arity 1");
  // Group by exponent: g = sum_mu e^{mu V} p_mu(V).
  struct Group {
    cplx mu;
    std::vector<cplx> poly;
  };
  std::vector<Group> groups;
  for (const auto& t : g.terms()) {
    const Factor& fac = t.key[0];
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Group& gr) { return std::abs(gr.mu - fac.mu) <= kMergeTol; });
    if (it == groups.end()) {
      groups.push_back({fac.mu, {}});
      it = std::prev(groups.end());
    }
    if (static_cast<int>(it->poly.size()) <= fac.power) it->poly.resize(fac.power + 1, 0.0);
    it->poly[fac.power] += t.coeff;
  }

  std::vector<Term> out;
  cplx f_at_zero = 0.0;
  for (const auto& gr : groups) {
    const int d = static_cast<int>(gr.poly.size()) - 1;
    const cplx z = std::exp(gr.mu);
    // Resonant when e^mu = 1, i.e. mu on the lattice 2*pi*i*Z.
    const double lattice = gr.mu.imag() / (2.0 * M_PI);
    const bool resonant = std::abs(gr.mu.real()) <= kMergeTol &&
                          std::abs(lattice - std::round(lattice)) <= kMergeTol;
    std::vector<cplx> b;
    if (!resonant) {
      b.assign(d + 1, 0.0);
      for (int m = d; m >= 0; --m) {
        cplx rhs = gr.poly[m];
        for (int j = m + 1; j <= d; ++j) rhs -= z * binomial(j, m) * b[j];
        b[m] = rhs / (z - 1.0);
      }
    } else {
      b.assign(d + 2, 0.0);
      for (int m = d; m >= 0; --m) {
        cplx rhs = gr.poly[m];
        for (int j = m + 2; j <= d + 1; ++j) rhs -= binomial(j, m) * b[j];
        b[m + 1] = rhs / static_cast<double>(m + 1);
      }
    }
    for (int j = 0; j < static_cast<int>(b.size()); ++j) {
      if (b[j] == 0.0) continue;
      Term t;
      t.key[0] = Factor{gr.mu, j};
      t.coeff = b[j];
      out.push_back(t);
    }
    f_at_zero += b[0];
  }
  if (f_at_zero != 0.0) {
    Term t;
    t.coeff = -f_at_zero;
    out.push_back(t);
  }
  return ExpPoly::from_terms(1, std::move(out), g.scale());
}

std::string to_string(const ExpPoly& f) {
  if (f.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& t : f.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << t.coeff.real() << (t.coeff.imag() < 0 ? "" : "+") << t.coeff.imag() << "i)";
    for (int j = 0; j < f.arity(); ++j) {
      const Factor& fac = t.key[j];
      if (fac.mu != 0.0) os << "*exp((" << fac.mu.real() << "," << fac.mu.imag() << ")*V" << j << ")";
      if (fac.power > 0) os << "*V" << j << "^" << fac.power;
    }
  }
  return os.str();
}

}  // namespace qhopf
