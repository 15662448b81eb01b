#ifndef TDRP_VEC_HPP_
#define TDRP_VEC_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace tdrp {

// Dense real vector. Size is fixed at construction; binary operations check
// dimension agreement; public constructors and mutators reject NaN/Inf.
class Vector {
 public:
  Vector() = default;
  explicit Vector(int size) : data_(static_cast<std::size_t>(size), 0.0) {}
  Vector(std::initializer_list<double> values);
  static Vector FromData(std::vector<double> values);

  int size() const { return static_cast<int>(data_.size()); }
  double& operator[](int i) { return data_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return data_[static_cast<std::size_t>(i)]; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<const double> values() const { return data_; }

  Vector& operator+=(const Vector& rhs);
  Vector& operator-=(const Vector& rhs);
  Vector& operator*=(double s);
  Vector operator+(const Vector& rhs) const;
  Vector operator-(const Vector& rhs) const;
  Vector operator*(double s) const;

  double Dot(const Vector& rhs) const;
  double Norm() const;            // Euclidean
  double SquaredNorm() const;
  void Fill(double value);
  void AddScaled(const Vector& rhs, double s);  // this += s * rhs
  bool IsFinite() const;
  void EnsureFinite(const char* context) const;

  bool operator==(const Vector& rhs) const { return data_ == rhs.data_; }

 private:
  std::vector<double> data_;
};

double Distance(const Vector& a, const Vector& b);          // ‖a − b‖₂
double SquaredDistance(const Vector& a, const Vector& b);

// Dense row-major matrix (rows × cols).
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t count() const { return data_.size(); }

  // out = this * x + bias
  void Apply(const Vector& x, const Vector& bias, Vector& out) const;
  // accumulates this^T * y into out (out must be sized cols)
  void ApplyTransposed(const Vector& y, Vector& out) const;
  // rank-1 accumulate: this += y * x^T
  void AddOuter(const Vector& y, const Vector& x);

  void Fill(double value);
  void AddScaled(const Matrix& rhs, double s);
  bool IsFinite() const;

  bool operator==(const Matrix& rhs) const {
    return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

}  // namespace tdrp

#endif  // TDRP_VEC_HPP_
