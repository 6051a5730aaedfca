#include "sclab/ensemble.hpp"

#include <cmath>
#include <stdexcept>

namespace sclab::ensemble {
namespace {

bool is_sparse(Kind k) { return k == Kind::erdos_renyi || k == Kind::centered_sparse; }

}  // namespace

void validate(const Params& p) {
  if (p.n < 1) throw std::invalid_argument("ensemble: n must be at least 1");
  if (is_sparse(p.kind)) {
    if (!(p.q > 0.0)) throw std::invalid_argument("ensemble: q must be positive");
    if (!(p.q * p.q < p.n))
      throw std::invalid_argument("ensemble: q^2 must be smaller than n");
  }
}

double gamma_factor(const Params& p) {
  if (!is_sparse(p.kind))
    throw std::invalid_argument(
        "ensemble: gamma is undefined for the Bernoulli kind (q = sqrt(n))");
  validate(p);
  return 1.0 / std::sqrt(1.0 - p.q * p.q / p.n);
}

double mean_shift(const Params& p) { return gamma_factor(p) * p.q; }

double effective_q(const Params& p) {
  return is_sparse(p.kind) ? p.q : std::sqrt(static_cast<double>(p.n));
}

double resolve_f(const Params& p) {
  if (p.f) return *p.f;
  if (!is_sparse(p.kind))
    throw std::invalid_argument(
        "ensemble: automatic f is undefined for the Bernoulli kind; set f explicitly");
  return mean_shift(p);
}

std::vector<double> uniform_unit_vector(int n) {
  if (n < 1) throw std::invalid_argument("uniform_unit_vector: n must be at least 1");
  return std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

Sample sample_adjacency(const Params& p, RngStream& rng) {
  if (p.kind != Kind::erdos_renyi)
    throw std::invalid_argument("sample_adjacency: requires the erdos_renyi kind");
  validate(p);
  const int n = p.n;
  const double gamma = gamma_factor(p);
  const double edge_prob = p.q * p.q / n;
  const double hit = gamma / p.q;       // nonzero entry value of A
  const double shift = gamma * p.q / n; // subtracted mean
  Sample s{SymmetricMatrix(n), SymmetricMatrix(n), gamma * p.q};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double a;
      if (i == j && p.zero_diagonal)
        a = 0.0;  // no draw: the stream stays aligned with the entry set used
      else
        a = rng.bernoulli(edge_prob) ? hit : 0.0;
      s.a.set(i, j, a);
      s.h.set(i, j, a - shift);
    }
  return s;
}

SymmetricMatrix sample_centered(const Params& p, RngStream& rng) {
  validate(p);
  const int n = p.n;
  SymmetricMatrix h(n);
  if (is_sparse(p.kind)) {
    const double gamma = gamma_factor(p);
    const double edge_prob = p.q * p.q / n;
    const double shift = gamma * p.q / n;
    const double hit = gamma / p.q - shift;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        if (i == j && p.zero_diagonal)
          h.set(i, j, -shift);
        else
          h.set(i, j, rng.bernoulli(edge_prob) ? hit : -shift);
      }
  } else {
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        if (i == j && p.zero_diagonal)
          h.set(i, j, 0.0);
        else
          h.set(i, j, rng.sign() * scale);
      }
  }
  return h;
}

std::vector<double> sample_row(const Params& p, RngStream& rng) {
  validate(p);
  const int n = p.n;
  std::vector<double> row(n);
  if (is_sparse(p.kind)) {
    const double gamma = gamma_factor(p);
    const double edge_prob = p.q * p.q / n;
    const double shift = gamma * p.q / n;
    const double hit = gamma / p.q - shift;
    for (int i = 0; i < n; ++i) {
      if (i == 0 && p.zero_diagonal)
        row[i] = -shift;
      else
        row[i] = rng.bernoulli(edge_prob) ? hit : -shift;
    }
  } else {
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
      if (i == 0 && p.zero_diagonal)
        row[i] = 0.0;
      else
        row[i] = rng.sign() * scale;
    }
  }
  return row;
}

SymmetricMatrix apply_mean_shift(const SymmetricMatrix& h, double f) {
  const int n = h.size();
  SymmetricMatrix a(n);
  const double shift = f / n;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a.set(i, j, h(i, j) + shift);
  return a;
}

MomentReport moment_report(const Params& p, long long trials, int p_max,
                           RngStream& rng) {
  validate(p);
  if (trials < 1000) throw std::invalid_argument("moment_report: need trials >= 1000");
  if (p_max < 2) throw std::invalid_argument("moment_report: need p_max >= 2");
  if (p.n < 2) throw std::invalid_argument("moment_report: need n >= 2");

  const long long pairs = static_cast<long long>(p.n) * (p.n - 1) / 2;
  const long long total = trials * pairs;

  // Off-diagonal entries take exactly two values, so every moment is an exact
  // function of the hit count; the loop only has to count.
  double v_hi, v_lo, prob_hi;
  if (is_sparse(p.kind)) {
    const double gamma = gamma_factor(p);
    const double shift = gamma * p.q / p.n;
    v_hi = gamma / p.q - shift;
    v_lo = -shift;
    prob_hi = p.q * p.q / p.n;
  } else {
    const double s = 1.0 / std::sqrt(static_cast<double>(p.n));
    v_hi = s;
    v_lo = -s;
    prob_hi = 0.5;
  }

  long long hits = 0;
  if (is_sparse(p.kind)) {
    for (long long t = 0; t < total; ++t)
      if (rng.bernoulli(prob_hi)) ++hits;
  } else {
    for (long long t = 0; t < total; ++t)
      if (rng.sign() > 0.0) ++hits;
  }

  const double frac_hi = static_cast<double>(hits) / total;
  const double frac_lo = 1.0 - frac_hi;
  auto moment = [&](int pw) {
    return frac_hi * std::pow(std::fabs(v_hi), pw) +
           frac_lo * std::pow(std::fabs(v_lo), pw);
  };

  MomentReport r;
  r.samples = total;
  r.mean_h = frac_hi * v_hi + frac_lo * v_lo;
  const double m2 = moment(2);
  const double m4 = moment(4);
  r.mean_stderr = std::sqrt(std::max(m2 - r.mean_h * r.mean_h, 0.0) / total);
  r.var_stderr = std::sqrt(std::max(m4 - m2 * m2, 0.0) / total);

  const double q_eff = effective_q(p);
  for (int pw = 2; pw <= p_max; ++pw) {
    MomentRow row;
    row.p = pw;
    row.sample_mean = moment(pw);
    row.reference = 1.0 / (p.n * std::pow(q_eff, pw - 2));
    row.ratio = row.sample_mean / row.reference;
    r.rows.push_back(row);
  }
  return r;
}

}  // namespace sclab::ensemble
