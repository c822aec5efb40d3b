#include "crpc/complex_poly.hpp"

#include <iomanip>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "crpc/error.hpp"

namespace crpc {

ComplexPoly::ComplexPoly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }

ComplexPoly::ComplexPoly(std::initializer_list<cplx> coeffs) : c_(coeffs) { trim(); }

void ComplexPoly::trim() {
  while (!c_.empty() && c_.back() == cplx{}) c_.pop_back();
}

namespace {

double parse_number(const std::string& s, const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    fail(ErrorKind::ConfigError, "bad complex coefficient '" + token + "'");
  }
  return v;
}

}  // namespace

ComplexPoly ComplexPoly::parse(const std::string& text) {
  std::istringstream is(text);
  std::string token;
  std::vector<cplx> c;
  while (is >> token) {
    std::string body = token;
    if (body.front() == '(') {
      if (body.back() != ')') fail(ErrorKind::ConfigError, "unbalanced '(' in '" + token + "'");
      body = body.substr(1, body.size() - 2);
    }
    const auto comma = body.find(',');
    if (comma == std::string::npos) {
      c.emplace_back(parse_number(body, token), 0.0);
    } else {
      c.emplace_back(parse_number(body.substr(0, comma), token),
                     parse_number(body.substr(comma + 1), token));
    }
  }
  return ComplexPoly(std::move(c));
}

std::string ComplexPoly::to_string() const {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (k) os << ' ';
    os << '(' << c_[k].real() << ',' << c_[k].imag() << ')';
  }
  return c_.empty() ? "0" : os.str();
}

cplx ComplexPoly::operator()(cplx w) const noexcept {
  cplx acc{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * w + *it;
  return acc;
}

ComplexPoly ComplexPoly::derivative() const {
  std::vector<cplx> d;
  for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(static_cast<double>(k) * c_[k]);
  return ComplexPoly(std::move(d));
}

ComplexPoly ComplexPoly::integral() const {
  if (c_.empty()) return {};
  std::vector<cplx> d(c_.size() + 1);
  for (std::size_t k = 0; k < c_.size(); ++k) d[k + 1] = c_[k] / static_cast<double>(k + 1);
  return ComplexPoly(std::move(d));
}

std::vector<cplx> ComplexPoly::roots() const {
  const int n = degree();
  if (n < 1) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c_[i] / c_[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return r;
}

ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b) {
  std::vector<cplx> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
  return ComplexPoly(std::move(c));
}

ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b) {
  return a + cplx(-1.0) * b;
}

ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<cplx> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return ComplexPoly(std::move(c));
}

ComplexPoly operator*(cplx s, const ComplexPoly& a) {
  std::vector<cplx> c(a.c_);
  for (auto& v : c) v *= s;
  return ComplexPoly(std::move(c));
}

}  // namespace crpc
