#pragma once

// Direct-enumeration reference implementations. They work on the raw symbol
// vector and share no counting code with the library.

#include <cmath>
#include <map>
#include <vector>

#include "mtd/alphabet.hpp"

namespace mtd::brute {

using Values = std::vector<Symbol>;
using Key = std::vector<Symbol>;

inline Key context_at(const Values& x, std::size_t t, const std::vector<int>& lags) {
  Key k;
  for (auto it = lags.rbegin(); it != lags.rend(); ++it) k.push_back(x[t - static_cast<std::size_t>(*it)]);
  return k;
}

inline std::vector<double> conditional(const std::map<Key, std::vector<double>>& counts, const Key& k,
                                       std::size_t A) {
  auto it = counts.find(k);
  std::vector<double> p(A, 1.0 / static_cast<double>(A));
  if (it == counts.end()) return p;
  double total = 0.0;
  for (double c : it->second) total += c;
  for (std::size_t a = 0; a < A; ++a) p[a] = it->second[a] / total;
  return p;
}

inline double tv(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s / 2.0;
}

inline double nu(const Values& x, std::size_t A, int d, int j, const std::vector<int>& S) {
  const double n = static_cast<double>(x.size() - static_cast<std::size_t>(d));
  std::map<Key, double> ctx;
  std::map<Key, std::vector<double>> ext;  // key: x_S then b
  for (std::size_t t = static_cast<std::size_t>(d); t < x.size(); ++t) {
    Key k = context_at(x, t, S);
    ctx[k] += 1.0;
    k.push_back(x[t - static_cast<std::size_t>(j)]);
    ext[k].resize(A);
    ext[k][x[t]] += 1.0;
  }
  double total = 0.0;
  for (const auto& [k, nk] : ctx) {
    for (Symbol b = 0; b < A; ++b) {
      for (Symbol c = 0; c < A; ++c) {
        Key kb = k, kc = k;
        kb.push_back(b);
        kc.push_back(c);
        auto mass = [&](const Key& key) {
          auto it = ext.find(key);
          if (it == ext.end()) return 0.0;
          double s = 0.0;
          for (double v : it->second) s += v;
          return s;
        };
        total += (mass(kb) / n) * (mass(kc) / n) * tv(conditional(ext, kb, A), conditional(ext, kc, A)) / (nk / n);
      }
    }
  }
  return total;
}

inline std::vector<int> fs(const Values& x, std::size_t A, int d, int l) {
  std::vector<int> S;
  for (int step = 0; step < l; ++step) {
    int best = 0;
    double best_nu = -1.0;
    for (int j = 1; j <= d; ++j) {
      bool used = false;
      for (int s : S) used |= s == j;
      if (used) continue;
      const double v = nu(x, A, d, j, S);
      if (v > best_nu) {
        best_nu = v;
        best = j;
      }
    }
    S.push_back(best);
  }
  return S;
}

inline double neg_log_likelihood(const Values& x, std::size_t A, int d, const std::vector<int>& S) {
  std::map<Key, std::vector<double>> counts;
  for (std::size_t t = static_cast<std::size_t>(d); t < x.size(); ++t) {
    auto& row = counts[context_at(x, t, S)];
    row.resize(A);
    row[x[t]] += 1.0;
  }
  double ll = 0.0;
  for (const auto& [k, row] : counts) {
    double total = 0.0;
    for (double c : row) total += c;
    for (double c : row) {
      if (c > 0) ll -= c * std::log(c / total);
    }
  }
  return ll;
}

inline double bic(const Values& x, std::size_t A, int d, const std::vector<int>& S, double xi, bool single,
                  bool indep) {
  const double a = static_cast<double>(A);
  const double k = static_cast<double>(S.size());
  const double zeta = single ? 1.0 : k;
  const double theta = indep ? k + (a - 1) * (1 + a * zeta) : (k - 1) + (a - 1) * a * zeta;
  return neg_log_likelihood(x, A, d, S) + theta * std::log(static_cast<double>(x.size())) * xi;
}

inline double cut_threshold(const std::vector<double>& p, double n, double alpha, double mu, double xi) {
  const double ratio = mu / (mu - (std::exp(mu) - mu - 1.0));
  double s = 0.0;
  for (double pa : p) s += std::sqrt(ratio * (pa + alpha / n));
  return std::sqrt(alpha * (1.0 + xi) / (2.0 * n)) * s + alpha * static_cast<double>(p.size()) / (6.0 * n);
}

// Lags of S kept by the compatible-pair test.
inline std::vector<int> cut(const Values& x, std::size_t A, int d, const std::vector<int>& S, double alpha,
                            double mu, double xi) {
  std::map<Key, std::vector<double>> counts;
  for (std::size_t t = static_cast<std::size_t>(d); t < x.size(); ++t) {
    auto& row = counts[context_at(x, t, S)];
    row.resize(A);
    row[x[t]] += 1.0;
  }
  std::vector<int> kept;
  for (std::size_t pos = 0; pos < S.size(); ++pos) {
    const std::size_t digit = S.size() - 1 - pos;  // keys are oldest first
    bool keep = false;
    for (const auto& [kx, rx] : counts) {
      for (const auto& [ky, ry] : counts) {
        bool compatible = true;
        for (std::size_t i = 0; i < kx.size(); ++i) compatible &= i == digit || kx[i] == ky[i];
        if (!compatible) continue;
        double nx = 0, ny = 0;
        for (double c : rx) nx += c;
        for (double c : ry) ny += c;
        const auto px = conditional(counts, kx, A);
        const auto py = conditional(counts, ky, A);
        if (tv(px, py) > cut_threshold(px, nx, alpha, mu, xi) + cut_threshold(py, ny, alpha, mu, xi)) keep = true;
      }
    }
    if (keep) kept.push_back(S[pos]);
  }
  return kept;
}

}  // namespace mtd::brute
