#pragma once

// Exact linear algebra over the three-element field.
//
// Vectors are dense; matrices are row collections carrying one label per row
// so that callers can map elimination results back to whatever produced each
// row (a vertex, a generator, ...).

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace z3flow {

class Gf3 {
 public:
  constexpr Gf3() = default;
  constexpr Gf3(int value) : value_(static_cast<std::uint8_t>(((value % 3) + 3) % 3)) {}

  constexpr std::uint8_t value() const { return value_; }
  constexpr bool is_zero() const { return value_ == 0; }

  constexpr Gf3 inverse() const {
    if (value_ == 0) throw std::domain_error("Gf3: zero has no inverse");
    return *this;  // 1*1 = 1 and 2*2 = 4 = 1
  }

  friend constexpr Gf3 operator+(Gf3 a, Gf3 b) { return Gf3(a.value_ + b.value_); }
  friend constexpr Gf3 operator-(Gf3 a, Gf3 b) { return Gf3(a.value_ + 3 - b.value_); }
  friend constexpr Gf3 operator-(Gf3 a) { return Gf3(3 - a.value_); }
  friend constexpr Gf3 operator*(Gf3 a, Gf3 b) { return Gf3(a.value_ * b.value_); }
  friend constexpr Gf3 operator/(Gf3 a, Gf3 b) { return a * b.inverse(); }
  constexpr Gf3& operator+=(Gf3 o) { return *this = *this + o; }
  constexpr Gf3& operator-=(Gf3 o) { return *this = *this - o; }
  constexpr Gf3& operator*=(Gf3 o) { return *this = *this * o; }

  friend constexpr bool operator==(Gf3, Gf3) = default;
  friend constexpr auto operator<=>(Gf3, Gf3) = default;

  friend std::ostream& operator<<(std::ostream& os, Gf3 x) { return os << int(x.value_); }

 private:
  std::uint8_t value_ = 0;
};

class Gf3Vector {
 public:
  Gf3Vector() = default;
  explicit Gf3Vector(std::size_t dimension) : coords_(dimension) {}
  Gf3Vector(std::initializer_list<int> values) {
    coords_.reserve(values.size());
    for (int v : values) coords_.emplace_back(v);
  }
  explicit Gf3Vector(std::vector<Gf3> coords) : coords_(std::move(coords)) {}

  std::size_t dimension() const { return coords_.size(); }

  Gf3 operator[](std::size_t i) const { return coords_[i]; }
  Gf3& operator[](std::size_t i) { return coords_[i]; }
  Gf3 at(std::size_t i) const {
    if (i >= coords_.size()) throw std::out_of_range("Gf3Vector: coordinate out of range");
    return coords_[i];
  }

  const std::vector<Gf3>& coords() const { return coords_; }
  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }

  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](Gf3 x) { return x.is_zero(); });
  }
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (!coords_[i].is_zero()) out.push_back(i);
    return out;
  }

  Gf3Vector& operator+=(const Gf3Vector& o) {
    check_same(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  Gf3Vector& operator-=(const Gf3Vector& o) {
    check_same(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  Gf3Vector& operator*=(Gf3 s) {
    for (auto& c : coords_) c *= s;
    return *this;
  }
  // this += s * o
  void add_scaled(const Gf3Vector& o, Gf3 s) {
    check_same(o);
    if (s.is_zero()) return;
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += s * o.coords_[i];
  }

  friend Gf3Vector operator+(Gf3Vector a, const Gf3Vector& b) { return a += b; }
  friend Gf3Vector operator-(Gf3Vector a, const Gf3Vector& b) { return a -= b; }
  friend Gf3Vector operator-(Gf3Vector a) { return a *= Gf3(2); }
  friend Gf3Vector operator*(Gf3 s, Gf3Vector a) { return a *= s; }

  friend bool operator==(const Gf3Vector&, const Gf3Vector&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Gf3Vector& v) {
    os << '(';
    for (std::size_t i = 0; i < v.dimension(); ++i) os << (i ? "," : "") << v[i];
    return os << ')';
  }

 private:
  void check_same(const Gf3Vector& o) const {
    if (o.dimension() != dimension()) throw std::invalid_argument("Gf3Vector: dimension mismatch");
  }

  std::vector<Gf3> coords_;
};

inline Gf3 dot(const Gf3Vector& a, const Gf3Vector& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("dot: dimension mismatch");
  Gf3 acc;
  for (std::size_t i = 0; i < a.dimension(); ++i) acc += a[i] * b[i];
  return acc;
}

/// Ordered rows of equal dimension, each tagged with a unique label.
template <typename Label = std::size_t>
class BasicGf3Matrix {
 public:
  explicit BasicGf3Matrix(std::size_t dimension) : dimension_(dimension) {}

  void add_row(Gf3Vector row, Label label) {
    if (row.dimension() != dimension_)
      throw std::invalid_argument("Gf3Matrix: row dimension " + std::to_string(row.dimension()) +
                                  " != " + std::to_string(dimension_));
    if (std::find(labels_.begin(), labels_.end(), label) != labels_.end())
      throw std::invalid_argument("Gf3Matrix: duplicate row label");
    rows_.push_back(std::move(row));
    labels_.push_back(std::move(label));
  }

  std::size_t dimension() const { return dimension_; }
  std::size_t row_count() const { return rows_.size(); }
  const std::vector<Gf3Vector>& rows() const { return rows_; }
  const std::vector<Label>& labels() const { return labels_; }
  const Gf3Vector& row(std::size_t i) const { return rows_[i]; }
  const Label& label(std::size_t i) const { return labels_[i]; }

  Gf3Vector apply(const Gf3Vector& v) const {
    Gf3Vector out(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) out[r] = dot(rows_[r], v);
    return out;
  }

 private:
  std::size_t dimension_;
  std::vector<Gf3Vector> rows_;
  std::vector<Label> labels_;
};

using Gf3Matrix = BasicGf3Matrix<std::size_t>;

struct EchelonForm {
  std::size_t dimension = 0;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_columns;
  std::vector<std::size_t> free_columns;
  // reduced_rows[i] has a leading 1 in pivot_columns[i].
  std::vector<Gf3Vector> reduced_rows;
  // elimination_record[i] is the combination of input rows equal to reduced_rows[i].
  std::vector<Gf3Vector> elimination_record;
  // One combination per input row that reduced to zero; each is nonzero and sums the rows to 0.
  std::vector<Gf3Vector> null_combinations;
};

/// Gauss-Jordan elimination. Columns are scanned left to right; the pivot for
/// a column is the lowest-index remaining row with a nonzero entry there.
template <typename Label>
EchelonForm rref(const BasicGf3Matrix<Label>& m) {
  const std::size_t rows = m.row_count();
  const std::size_t cols = m.dimension();
  std::vector<Gf3Vector> work = m.rows();
  std::vector<Gf3Vector> record;
  record.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    Gf3Vector e(rows);
    e[r] = Gf3(1);
    record.push_back(std::move(e));
  }

  EchelonForm out;
  out.dimension = cols;
  std::size_t next = 0;
  for (std::size_t c = 0; c < cols && next < rows; ++c) {
    std::size_t pivot = next;
    while (pivot < rows && work[pivot][c].is_zero()) ++pivot;
    if (pivot == rows) continue;
    if (pivot != next) {
      // Rotate instead of swap so the remaining rows keep their relative order.
      std::rotate(work.begin() + next, work.begin() + pivot, work.begin() + pivot + 1);
      std::rotate(record.begin() + next, record.begin() + pivot, record.begin() + pivot + 1);
    }
    const Gf3 inv = work[next][c].inverse();
    work[next] *= inv;
    record[next] *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == next || work[r][c].is_zero()) continue;
      const Gf3 factor = -work[r][c];
      work[r].add_scaled(work[next], factor);
      record[r].add_scaled(record[next], factor);
    }
    out.pivot_columns.push_back(c);
    ++next;
  }
  out.rank = next;
  for (std::size_t c = 0, p = 0; c < cols; ++c) {
    if (p < out.pivot_columns.size() && out.pivot_columns[p] == c)
      ++p;
    else
      out.free_columns.push_back(c);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (r < out.rank) {
      out.reduced_rows.push_back(std::move(work[r]));
      out.elimination_record.push_back(std::move(record[r]));
    } else {
      assert(work[r].is_zero());
      out.null_combinations.push_back(std::move(record[r]));
    }
  }
  return out;
}

/// Basis of {v : m v = 0} parameterized by the free columns of the echelon form.
struct KernelBasis {
  std::size_t dimension = 0;
  std::vector<std::size_t> free_columns;
  std::vector<std::size_t> pivot_columns;
  // basis[i] is 1 at free_columns[i] and 0 at every other free column.
  std::vector<Gf3Vector> basis;
  // coefficients[j] expresses coordinate pivot_columns[j] of any kernel member
  // as a combination of its values on free_columns.
  std::vector<Gf3Vector> coefficients;

  std::size_t nullity() const { return basis.size(); }

  /// Rebuilds the kernel member whose free-column values are `free_values`.
  Gf3Vector reconstruct(const Gf3Vector& free_values) const {
    if (free_values.dimension() != free_columns.size())
      throw std::invalid_argument("KernelBasis::reconstruct: expected one value per free column");
    Gf3Vector out(dimension);
    for (std::size_t i = 0; i < free_columns.size(); ++i) out[free_columns[i]] = free_values[i];
    for (std::size_t j = 0; j < pivot_columns.size(); ++j) out[pivot_columns[j]] = dot(coefficients[j], free_values);
    return out;
  }

  Gf3Vector restrict_to_free(const Gf3Vector& v) const {
    Gf3Vector out(free_columns.size());
    for (std::size_t i = 0; i < free_columns.size(); ++i) out[i] = v[free_columns[i]];
    return out;
  }
};

inline KernelBasis kernel_from_echelon(const EchelonForm& ef) {
  KernelBasis k;
  k.dimension = ef.dimension;
  k.free_columns = ef.free_columns;
  k.pivot_columns = ef.pivot_columns;
  // Row i reads x[p_i] + sum_f r_i[f] x[f] = 0, so x[p_i] = -sum_f r_i[f] x[f].
  for (std::size_t j = 0; j < ef.rank; ++j) {
    Gf3Vector c(ef.free_columns.size());
    for (std::size_t i = 0; i < ef.free_columns.size(); ++i) c[i] = -ef.reduced_rows[j][ef.free_columns[i]];
    k.coefficients.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < ef.free_columns.size(); ++i) {
    Gf3Vector unit(ef.free_columns.size());
    unit[i] = Gf3(1);
    k.basis.push_back(k.reconstruct(unit));
  }
  return k;
}

template <typename Label>
KernelBasis kernel_basis(const BasicGf3Matrix<Label>& m) {
  return kernel_from_echelon(rref(m));
}

/// A nonzero coefficient vector over the rows of `m` combining them to zero,
/// or nullopt when the rows are linearly independent.
template <typename Label>
std::optional<Gf3Vector> dependency_combination(const BasicGf3Matrix<Label>& m) {
  EchelonForm ef = rref(m);
  if (ef.null_combinations.empty()) return std::nullopt;
  Gf3Vector lambda = ef.null_combinations.front();
  Gf3Vector sum(m.dimension());
  for (std::size_t r = 0; r < m.row_count(); ++r) sum.add_scaled(m.row(r), lambda[r]);
  if (lambda.is_zero() || !sum.is_zero())
    throw std::logic_error("dependency_combination: elimination record does not cancel");
  return lambda;
}

}  // namespace z3flow
