#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qemlab/errors.hpp"

namespace qemlab {

enum class Variance : unsigned char { Co, Contra };

// Dense tensor components at a single point, rank 0 to 4, with one variance
// flag per slot.  Indexing is row-major in the slot order of construction.
class TensorValue {
public:
    TensorValue() = default;
    TensorValue(int dim, std::vector<Variance> variances, std::vector<double> point);

    int dim() const { return dim_; }
    int rank() const { return static_cast<int>(var_.size()); }
    const std::vector<Variance>& variances() const { return var_; }
    const std::vector<double>& point() const { return point_; }

    double& at() { return v_[0]; }
    double& at(int i) { return v_[i]; }
    double& at(int i, int j) { return v_[i * dim_ + j]; }
    double& at(int i, int j, int k) { return v_[(i * dim_ + j) * dim_ + k]; }
    double& at(int i, int j, int k, int l) { return v_[((i * dim_ + j) * dim_ + k) * dim_ + l]; }

    double at() const { return v_[0]; }
    double at(int i) const { return v_[i]; }
    double at(int i, int j) const { return v_[i * dim_ + j]; }
    double at(int i, int j, int k) const { return v_[(i * dim_ + j) * dim_ + k]; }
    double at(int i, int j, int k, int l) const {
        return v_[((i * dim_ + j) * dim_ + k) * dim_ + l];
    }

    std::span<const double> data() const { return v_; }
    std::span<double> data() { return v_; }

    double max_abs() const;
    bool finite() const;

    TensorValue& operator+=(const TensorValue& o);
    TensorValue& operator-=(const TensorValue& o);
    TensorValue& operator*=(double c);
    friend TensorValue operator+(TensorValue a, const TensorValue& b) { a += b; return a; }
    friend TensorValue operator-(TensorValue a, const TensorValue& b) { a -= b; return a; }
    friend TensorValue operator*(TensorValue a, double c) { a *= c; return a; }
    friend TensorValue operator*(double c, TensorValue a) { a *= c; return a; }

private:
    int dim_ = 0;
    std::vector<Variance> var_;
    std::vector<double> point_;
    std::vector<double> v_;
};

// Raise every covariant slot with g_inv and lower every contravariant slot
// with g, giving the dual tensor.
TensorValue dual_tensor(const TensorValue& t, const Eigen::MatrixXd& g,
                        const Eigen::MatrixXd& g_inv);

// Plain componentwise dot product; shapes must match.
double component_dot(const TensorValue& a, const TensorValue& b);

// Metric norm squared |t|^2 = t . dual(t).
double norm_sq(const TensorValue& t, const Eigen::MatrixXd& g, const Eigen::MatrixXd& g_inv);

} // namespace qemlab
