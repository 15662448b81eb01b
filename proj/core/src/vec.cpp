#include "tdrp/vec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tdrp {

namespace {
void CheckSameSize(int a, int b, const char* op) {
  if (a != b) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}
}  // namespace

Vector::Vector(std::initializer_list<double> values) : data_(values) {
  EnsureFinite("Vector{init}");
}

Vector Vector::FromData(std::vector<double> values) {
  Vector v;
  v.data_ = std::move(values);
  v.EnsureFinite("Vector::FromData");
  return v;
}

Vector& Vector::operator+=(const Vector& rhs) {
  CheckSameSize(size(), rhs.size(), "Vector::operator+=");
  for (int i = 0; i < size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& rhs) {
  CheckSameSize(size(), rhs.size(), "Vector::operator-=");
  for (int i = 0; i < size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Vector Vector::operator+(const Vector& rhs) const {
  Vector out = *this;
  out += rhs;
  return out;
}

Vector Vector::operator-(const Vector& rhs) const {
  Vector out = *this;
  out -= rhs;
  return out;
}

Vector Vector::operator*(double s) const {
  Vector out = *this;
  out *= s;
  return out;
}

double Vector::Dot(const Vector& rhs) const {
  CheckSameSize(size(), rhs.size(), "Vector::Dot");
  double acc = 0.0;
  for (int i = 0; i < size(); ++i) acc += data_[i] * rhs.data_[i];
  return acc;
}

double Vector::SquaredNorm() const {
  double acc = 0.0;
  for (double v : data_) acc += v * v;
  return acc;
}

double Vector::Norm() const { return std::sqrt(SquaredNorm()); }

void Vector::Fill(double value) {
  for (double& v : data_) v = value;
}

void Vector::AddScaled(const Vector& rhs, double s) {
  CheckSameSize(size(), rhs.size(), "Vector::AddScaled");
  for (int i = 0; i < size(); ++i) data_[i] += s * rhs.data_[i];
}

bool Vector::IsFinite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Vector::EnsureFinite(const char* context) const {
  if (!IsFinite()) {
    throw std::runtime_error(std::string(context) + ": non-finite entry");
  }
}

double SquaredDistance(const Vector& a, const Vector& b) {
  CheckSameSize(a.size(), b.size(), "SquaredDistance");
  double acc = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double Distance(const Vector& a, const Vector& b) {
  return std::sqrt(SquaredDistance(a, b));
}

void Matrix::Apply(const Vector& x, const Vector& bias, Vector& out) const {
  CheckSameSize(cols_, x.size(), "Matrix::Apply input");
  CheckSameSize(rows_, bias.size(), "Matrix::Apply bias");
  if (out.size() != rows_) out = Vector(rows_);
  const double* xp = x.data();
  for (int r = 0; r < rows_; ++r) {
    const double* row = data_.data() + static_cast<std::size_t>(r) * cols_;
    double acc = bias[r];
    for (int c = 0; c < cols_; ++c) acc += row[c] * xp[c];
    out[r] = acc;
  }
}

void Matrix::ApplyTransposed(const Vector& y, Vector& out) const {
  CheckSameSize(rows_, y.size(), "Matrix::ApplyTransposed input");
  CheckSameSize(cols_, out.size(), "Matrix::ApplyTransposed output");
  for (int r = 0; r < rows_; ++r) {
    const double* row = data_.data() + static_cast<std::size_t>(r) * cols_;
    double yr = y[r];
    double* op = out.data();
    for (int c = 0; c < cols_; ++c) op[c] += row[c] * yr;
  }
}

void Matrix::AddOuter(const Vector& y, const Vector& x) {
  CheckSameSize(rows_, y.size(), "Matrix::AddOuter lhs");
  CheckSameSize(cols_, x.size(), "Matrix::AddOuter rhs");
  const double* xp = x.data();
  for (int r = 0; r < rows_; ++r) {
    double* row = data_.data() + static_cast<std::size_t>(r) * cols_;
    double yr = y[r];
    for (int c = 0; c < cols_; ++c) row[c] += yr * xp[c];
  }
}

void Matrix::Fill(double value) {
  for (double& v : data_) v = value;
}

void Matrix::AddScaled(const Matrix& rhs, double s) {
  CheckSameSize(rows_, rhs.rows_, "Matrix::AddScaled rows");
  CheckSameSize(cols_, rhs.cols_, "Matrix::AddScaled cols");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * rhs.data_[i];
}

bool Matrix::IsFinite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace tdrp
