#include "nadd/common.hpp"

#include <algorithm>

namespace nadd {

namespace {

constexpr std::string_view kDigits = "0123456789abcdefghijklmnopqrstuvwxyz";

}  // namespace

std::string word_to_string(WordView w) {
  std::string s;
  s.reserve(w.size());
  for (Symbol a : w) {
    if (a >= kDigits.size())
      throw DomainError("word_to_string: symbol " + std::to_string(int(a)) +
                        " exceeds the base-36 rendering range");
    s.push_back(kDigits[a]);
  }
  return s;
}

Word word_from_string(std::string_view s) {
  Word w;
  w.reserve(s.size());
  for (char c : s) {
    auto pos = kDigits.find(c);
    if (pos == std::string_view::npos)
      throw DomainError(std::string("word_from_string: invalid symbol character '") + c + "'");
    w.push_back(static_cast<Symbol>(pos));
  }
  return w;
}

int compare_words(WordView a, WordView b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  Matrix r(rows, o.cols);
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < cols; ++k) {
      const double aik = at(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < o.cols; ++j) r.at(i, j) += aik * o.at(k, j);
    }
  }
  return r;
}

double Matrix::entry_sum() const {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

double Matrix::min_entry() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : a) m = std::min(m, v);
  return m;
}

double Matrix::two_norm() const {
  // sigma_max via power iteration on A^T A; matrices here are tiny.
  std::vector<double> v(static_cast<std::size_t>(cols), 1.0);
  double sigma2 = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<double> av = mat_vec(*this, v);
    std::vector<double> atav(static_cast<std::size_t>(cols), 0.0);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) atav[j] += at(i, j) * av[i];
    double nv = 0.0;
    for (double x : atav) nv = std::max(nv, std::abs(x));
    if (nv == 0.0) return 0.0;
    for (double& x : atav) x /= nv;
    double num = 0.0, den = 0.0;
    for (int j = 0; j < cols; ++j) {
      num += atav[j] * v[j] * nv;
      den += v[j] * v[j];
    }
    double next = num / den;
    if (iter > 2 && std::abs(next - sigma2) <= 1e-15 * std::max(1.0, std::abs(next))) {
      sigma2 = next;
      break;
    }
    sigma2 = next;
    v = std::move(atav);
  }
  return std::sqrt(std::abs(sigma2));
}

std::vector<double> mat_vec(const Matrix& m, std::span<const double> v) {
  std::vector<double> r(static_cast<std::size_t>(m.rows), 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m.at(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

std::vector<double> vec_mat(std::span<const double> v, const Matrix& m) {
  std::vector<double> r(static_cast<std::size_t>(m.cols), 0.0);
  for (int i = 0; i < m.rows; ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    for (int j = 0; j < m.cols; ++j) r[j] += vi * m.at(i, j);
  }
  return r;
}

}  // namespace nadd
