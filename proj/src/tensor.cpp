#include "qemlab/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace qemlab {

TensorValue::TensorValue(int dim, std::vector<Variance> variances, std::vector<double> point)
    : dim_(dim), var_(std::move(variances)), point_(std::move(point)) {
    if (dim < 1)
        throw ShapeError("tensor dimension must be positive");
    if (var_.size() > 4)
        throw ShapeError("tensor rank exceeds 4");
    std::size_t sz = 1;
    for (std::size_t r = 0; r < var_.size(); ++r) sz *= static_cast<std::size_t>(dim);
    v_.assign(sz, 0.0);
}

double TensorValue::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

bool TensorValue::finite() const {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

namespace {

void check_same_shape(const TensorValue& a, const TensorValue& b) {
    if (a.dim() != b.dim() || a.variances() != b.variances())
        throw ShapeError("tensor shape mismatch");
}

} // namespace

TensorValue& TensorValue::operator+=(const TensorValue& o) {
    check_same_shape(*this, o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

TensorValue& TensorValue::operator-=(const TensorValue& o) {
    check_same_shape(*this, o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

TensorValue& TensorValue::operator*=(double c) {
    for (double& x : v_) x *= c;
    return *this;
}

TensorValue dual_tensor(const TensorValue& t, const Eigen::MatrixXd& g,
                        const Eigen::MatrixXd& g_inv) {
    const int n = t.dim();
    const int r = t.rank();
    TensorValue cur = t;
    // Contract one slot at a time against g or g_inv.
    for (int slot = 0; slot < r; ++slot) {
        const Eigen::MatrixXd& M =
            (t.variances()[slot] == Variance::Co) ? g_inv : g;
        TensorValue next = cur;
        std::size_t stride = 1;
        for (int s = slot + 1; s < r; ++s) stride *= static_cast<std::size_t>(n);
        std::size_t outer = 1;
        for (int s = 0; s < slot; ++s) outer *= static_cast<std::size_t>(n);
        auto src = cur.data();
        auto dst = next.data();
        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t in = 0; in < stride; ++in) {
                const std::size_t base = o * stride * n + in;
                for (int a = 0; a < n; ++a) {
                    double s = 0.0;
                    for (int b = 0; b < n; ++b) s += M(a, b) * src[base + b * stride];
                    dst[base + a * stride] = s;
                }
            }
        cur = std::move(next);
    }
    std::vector<Variance> flipped = t.variances();
    for (auto& v : flipped)
        v = (v == Variance::Co) ? Variance::Contra : Variance::Co;
    TensorValue out(n, flipped, t.point());
    std::copy(cur.data().begin(), cur.data().end(), out.data().begin());
    return out;
}

double component_dot(const TensorValue& a, const TensorValue& b) {
    if (a.dim() != b.dim() || a.rank() != b.rank())
        throw ShapeError("tensor shape mismatch in dot");
    double s = 0.0;
    auto da = a.data(), db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) s += da[i] * db[i];
    return s;
}

double norm_sq(const TensorValue& t, const Eigen::MatrixXd& g, const Eigen::MatrixXd& g_inv) {
    return component_dot(t, dual_tensor(t, g, g_inv));
}

} // namespace qemlab
