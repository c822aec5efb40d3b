#pragma once

#include <complex>
#include <string>
#include <vector>

namespace crpc {

using cplx = std::complex<double>;

/// Complex polynomial, coefficients in ascending degree. Trailing zeros are
/// trimmed so the leading coefficient is nonzero (the zero polynomial is empty).
class ComplexPoly {
public:
  ComplexPoly() = default;
  explicit ComplexPoly(std::vector<cplx> coeffs);
  ComplexPoly(std::initializer_list<cplx> coeffs);

  // Tokens separated by whitespace: "(re,im)", "re,im" or a bare real.
  static ComplexPoly parse(const std::string& text);
  std::string to_string() const;

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<cplx>& coeffs() const noexcept { return c_; }
  cplx coeff(int k) const noexcept {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : cplx{};
  }

  cplx operator()(cplx w) const noexcept;
  ComplexPoly derivative() const;
  ComplexPoly integral() const;  // zero constant term

  // Roots as eigenvalues of the companion matrix.
  std::vector<cplx> roots() const;

  friend ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b);
  friend ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b);
  friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b);
  friend ComplexPoly operator*(cplx s, const ComplexPoly& a);
  friend bool operator==(const ComplexPoly& a, const ComplexPoly& b) { return a.c_ == b.c_; }

private:
  void trim();
  std::vector<cplx> c_;
};

}  // namespace crpc
