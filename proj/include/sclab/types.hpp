#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sclab {

using cd = std::complex<double>;

// Dense real symmetric matrix with a single stored copy per unordered index
// pair (packed upper triangle, row major). Reads below the diagonal mirror
// the stored entry, so the matrix is symmetric by construction rather than
// by discipline.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(int n) : n_(n), upper_(packed_size(n), 0.0) {
    if (n < 0) throw std::invalid_argument("SymmetricMatrix: negative size");
  }

  int size() const { return n_; }

  double operator()(int i, int j) const {
    check(i, j);
    return i <= j ? upper_[idx(i, j)] : upper_[idx(j, i)];
  }

  void set(int i, int j, double v) {
    check(i, j);
    upper_[i <= j ? idx(i, j) : idx(j, i)] = v;
  }

  const std::vector<double>& packed() const { return upper_; }

  // Full n*n row-major copy; handy for LAPACK, which wants a square buffer.
  std::vector<double> to_dense() const {
    std::vector<double> d(static_cast<std::size_t>(n_) * n_);
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) {
        double v = upper_[idx(i, j)];
        d[static_cast<std::size_t>(i) * n_ + j] = v;
        d[static_cast<std::size_t>(j) * n_ + i] = v;
      }
    return d;
  }

  static std::size_t packed_size(int n) {
    return static_cast<std::size_t>(n) * (n + 1) / 2;
  }

 private:
  std::size_t idx(int i, int j) const {
    // requires i <= j; row i of the upper triangle starts after the
    // previous rows, which hold n + (n-1) + ... + (n-i+1) entries.
    return static_cast<std::size_t>(i) * n_ - static_cast<std::size_t>(i) * (i - 1) / 2 +
           (j - i);
  }
  void check(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
      throw std::out_of_range("SymmetricMatrix: index out of range");
  }

  int n_ = 0;
  std::vector<double> upper_;
};

// A spectral probe point z = E + i*eta in the upper half plane.
struct SpectralParam {
  double e = 0.0;
  double eta = 0.0;
  cd z() const { return {e, eta}; }
  bool valid() const { return eta > 0.0; }
};

}  // namespace sclab
