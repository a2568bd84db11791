#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nadd {

// Single absolute tolerance used by all float comparisons; echoed in reports.
inline constexpr double kDefaultTolerance = 1e-9;

// Exhaustive cylinder scans refuse to visit more words than this.
inline constexpr std::uint64_t kDefaultWordCap = std::uint64_t{1} << 24;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when an exhaustive enumeration would exceed the configured cap.
class CapExceededError : public Error {
 public:
  CapExceededError(const std::string& task, std::uint64_t required, std::uint64_t cap)
      : Error(task + " needs " + std::to_string(required) +
              " words but the enumeration cap is " + std::to_string(cap)),
        required_(required),
        cap_(cap) {}
  std::uint64_t required() const { return required_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;
using WordView = std::span<const Symbol>;

// Words print as digit strings, base 36 ("0".."9","a".."z").
std::string word_to_string(WordView w);
Word word_from_string(std::string_view s);
int compare_words(WordView a, WordView b);
inline Word to_word(WordView w) { return Word(w.begin(), w.end()); }

// Closed interval [lo, hi]; a point when lo == hi.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }
  bool is_point() const { return lo == hi; }
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

inline Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }

inline Interval scale(double c, Interval v) {
  if (c >= 0.0) return {c * v.lo, c * v.hi};
  return {c * v.hi, c * v.lo};
}

// Small dense matrix, row major. Used for cocycles and hidden-Markov weights.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static Matrix identity(int n);
  Matrix operator*(const Matrix& o) const;
  double entry_sum() const;
  double min_entry() const;
  // Largest singular value (power iteration on A^T A).
  double two_norm() const;
};

std::vector<double> mat_vec(const Matrix& m, std::span<const double> v);
std::vector<double> vec_mat(std::span<const double> v, const Matrix& m);

}  // namespace nadd
