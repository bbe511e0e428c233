#include "resdensity/forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

namespace resdensity::forms {

namespace {

void check_length(int d, std::size_t len) {
  if (d < 1) throw ValidationError("degree must be >= 1");
  if (len != tuple_length(d))
    throw ValidationError("expected " + std::to_string(tuple_length(d)) + " coefficients for d=" +
                          std::to_string(d) + ", got " + std::to_string(len));
}

template <typename T, typename Src>
std::vector<std::vector<T>> sylvester_matrix(int d, std::span<const Src> c) {
  const int n = 2 * d;
  std::vector<std::vector<T>> m(n, std::vector<T>(n, T(0)));
  for (int row = 0; row < d; ++row) {
    for (int k = 0; k <= d; ++k) {
      m[row][row + k] = T(c[d - k]);              // A_d .. A_0
      m[d + row][row + k] = T(c[2 * d + 1 - k]);  // B_d .. B_0
    }
  }
  return m;
}

// Fraction-free elimination; every division is exact.
template <typename T>
T bareiss_determinant(std::vector<std::vector<T>> m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return T(1);
  T prev(1);
  bool negate = false;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k] == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i)
        if (m[i][k] != 0) { swap_row = i; break; }
      if (swap_row < 0) return T(0);
      std::swap(m[k], m[swap_row]);
      negate = !negate;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return negate ? T(-m[n - 1][n - 1]) : m[n - 1][n - 1];
}

BigInt from_i128(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  const auto hi = static_cast<unsigned long>(u >> 64);
  const auto lo = static_cast<unsigned long>(u);
  BigInt r(hi);
  r <<= 64;
  r += lo;
  return neg ? BigInt(-r) : r;
}

// Combine values f(0..d) of a polynomial of degree <= d into f'(0) using
// forward differences: f'(0) = sum_k (-1)^(k+1) Delta^k f(0) / k.
BigInt derivative_at_zero(std::vector<BigInt> values) {
  const int d = static_cast<int>(values.size()) - 1;
  BigInt lcm(1);
  for (int k = 2; k <= d; ++k) lcm = lcm * k / gcd(lcm, BigInt(k));
  BigInt acc(0);
  for (int k = 1; k <= d; ++k) {
    for (int i = 0; i + k <= d; ++i) values[i] = values[i + 1] - values[i];
    const BigInt term = values[0] * (lcm / k);
    if (k % 2 == 1) acc += term; else acc -= term;
  }
  return acc / lcm;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  return t < 0 ? t + p : t;
}

}  // namespace

BigInt RationalMapModel::height() const {
  BigInt h(0);
  for (const auto& c : coeffs) h = std::max(h, BigInt(abs(c)));
  return h;
}

bool RationalMapModel::is_normalized() const {
  BigInt g(0);
  for (const auto& c : coeffs) g = gcd(g, c);
  if (g != 1) return false;
  const auto it = std::find_if(coeffs.begin(), coeffs.end(), [](const BigInt& c) { return c != 0; });
  return it != coeffs.end() && *it > 0;
}

BigInt sylvester_resultant(int d, std::span<const BigInt> coeffs) {
  check_length(d, coeffs.size());
  return bareiss_determinant(sylvester_matrix<BigInt>(d, coeffs));
}

std::optional<__int128> sylvester_resultant_small(int d, std::span<const std::int64_t> coeffs) {
  check_length(d, coeffs.size());
  // Each row of the Sylvester matrix holds one full coefficient vector.
  auto norm2 = [](std::span<const std::int64_t> v) {
    long double s = 0;
    for (auto x : v) s += static_cast<long double>(x) * static_cast<long double>(x);
    return s;
  };
  const long double bits = 0.5L * d * (std::log2(std::max(1.0L, norm2(coeffs.subspan(0, d + 1)))) +
                                       std::log2(std::max(1.0L, norm2(coeffs.subspan(d + 1)))));
  if (bits > 60.0L) return std::nullopt;
  return bareiss_determinant(sylvester_matrix<__int128>(d, coeffs));
}

BigInt sylvester_resultant(int d, std::span<const std::int64_t> coeffs) {
  if (auto small = sylvester_resultant_small(d, coeffs)) return from_i128(*small);
  std::vector<BigInt> big;
  big.reserve(coeffs.size());
  for (auto c : coeffs) big.push_back(big_from_i64(c));
  return sylvester_resultant(d, big);
}

BigInt resultant_d2(const BigInt& a, const BigInt& b, const BigInt& c,
                    const BigInt& d, const BigInt& e, const BigInt& f) {
  return a * a * f * f - a * b * e * f - 2 * a * c * d * f + a * c * e * e + b * b * d * f -
         b * c * d * e + c * c * d * d;
}

std::vector<BigInt> resultant_gradient(int d, std::span<const BigInt> point) {
  check_length(d, point.size());
  std::vector<BigInt> grad;
  grad.reserve(point.size());
  std::vector<BigInt> shifted(point.begin(), point.end());
  for (std::size_t i = 0; i < point.size(); ++i) {
    std::vector<BigInt> values;
    for (int t = 0; t <= d; ++t) {
      shifted[i] = point[i] + t;
      values.push_back(sylvester_resultant(d, shifted));
    }
    shifted[i] = point[i];
    grad.push_back(derivative_at_zero(std::move(values)));
  }
  return grad;
}

std::vector<BigInt> resultant_gradient(int d, std::span<const std::int64_t> point) {
  check_length(d, point.size());
  std::vector<BigInt> grad;
  grad.reserve(point.size());
  std::vector<std::int64_t> shifted(point.begin(), point.end());
  for (std::size_t i = 0; i < point.size(); ++i) {
    std::vector<BigInt> values;
    for (int t = 0; t <= d; ++t) {
      shifted[i] = point[i] + t;
      values.push_back(sylvester_resultant(d, std::span<const std::int64_t>(shifted)));
    }
    shifted[i] = point[i];
    grad.push_back(derivative_at_zero(std::move(values)));
  }
  return grad;
}

std::int64_t resultant_mod_p(int d, std::span<const std::int64_t> residues, std::int64_t p) {
  check_length(d, residues.size());
  auto m = sylvester_matrix<std::int64_t>(d, residues);
  const int n = 2 * d;
  std::int64_t det = 1;
  for (int k = 0; k < n; ++k) {
    int pivot = -1;
    for (int i = k; i < n; ++i)
      if (m[i][k] % p != 0) { pivot = i; break; }
    if (pivot < 0) return 0;
    if (pivot != k) {
      std::swap(m[k], m[pivot]);
      det = p - det;
    }
    const std::int64_t piv = ((m[k][k] % p) + p) % p;
    det = det * piv % p;
    const std::int64_t inv = inverse_mod(piv, p);
    for (int i = k + 1; i < n; ++i) {
      const std::int64_t factor = ((m[i][k] % p) + p) % p * inv % p;
      if (factor == 0) continue;
      for (int j = k; j < n; ++j) m[i][j] = ((m[i][j] - factor * (m[k][j] % p)) % p + p) % p;
    }
  }
  return det % p;
}

int ord_p(const BigInt& n, long p) {
  if (n == 0) throw ValidationError("ord_p of zero is infinite");
  if (p < 2) throw ValidationError("ord_p needs a prime p");
  BigInt rest;
  return static_cast<int>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), BigInt(p).get_mpz_t()));
}

RationalMapModel normalize_point(int d, std::span<const BigInt> tuple) {
  check_length(d, tuple.size());
  BigInt g(0);
  for (const auto& c : tuple) g = gcd(g, c);
  if (g == 0) throw ValidationError("cannot normalize the all-zero tuple");
  const auto first = std::find_if(tuple.begin(), tuple.end(), [](const BigInt& c) { return c != 0; });
  if (*first < 0) g = -g;
  RationalMapModel m{d, {}};
  m.coeffs.reserve(tuple.size());
  for (const auto& c : tuple) m.coeffs.push_back(c / g);
  return m;
}

RationalMapModel normalize_point(int d, std::span<const std::int64_t> tuple) {
  std::vector<BigInt> big;
  big.reserve(tuple.size());
  for (auto c : tuple) big.push_back(big_from_i64(c));
  return normalize_point(d, big);
}

RationalMapModel parse_model(int d, const std::string& csv) {
  std::vector<BigInt> coeffs;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty() && item[0] == '+') item.erase(0, 1);
    coeffs.push_back(big_from_string(item));
  }
  check_length(d, coeffs.size());
  return RationalMapModel{d, std::move(coeffs)};
}

nlohmann::json to_json(const RationalMapModel& m) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : m.coeffs) {
    if (c.fits_slong_p()) coeffs.push_back(c.get_si());
    else coeffs.push_back(big_to_string(c));
  }
  return nlohmann::json{{"d", m.d}, {"coeffs", coeffs}};
}

RationalMapModel model_from_json(const nlohmann::json& j) {
  RationalMapModel m{j.at("d").get<int>(), {}};
  for (const auto& c : j.at("coeffs")) {
    if (c.is_string()) m.coeffs.push_back(big_from_string(c.get<std::string>()));
    else m.coeffs.push_back(big_from_i64(c.get<std::int64_t>()));
  }
  check_length(m.d, m.coeffs.size());
  return m;
}

}  // namespace resdensity::forms
