#include "semiop/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace semiop {

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::dagger() const {
    Mat m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

std::vector<cx> Mat::apply(const std::vector<cx>& x) const {
    if (x.size() != cols_) throw std::invalid_argument("Mat::apply: dimension mismatch");
    std::vector<cx> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        cx acc = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

std::vector<cx> Mat::column(std::size_t j) const {
    std::vector<cx> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

double Mat::norm_fro() const {
    double s = 0.0;
    for (const cx& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

double Mat::off_diag_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (i != j) s += std::norm((*this)(i, j));
    return std::sqrt(s);
}

double Mat::max_abs() const {
    double m = 0.0;
    for (const cx& v : a_) m = std::max(m, std::abs(v));
    return m;
}

Mat& Mat::operator+=(const Mat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("Mat::+=: shape mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

Mat& Mat::operator-=(const Mat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("Mat::-=: shape mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

Mat& Mat::operator*=(cx s) {
    for (cx& v : a_) v *= s;
    return *this;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Mat::*: shape mismatch");
    Mat c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const cx aik = a(i, k);
            if (aik == cx{0.0}) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

EigenSystem jacobi_hermitian(Mat h, int max_sweeps) {
    if (h.rows() != h.cols()) throw std::invalid_argument("jacobi_hermitian: matrix must be square");
    const std::size_t n = h.rows();

    // Symmetrize; diagonals become exactly real.
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = h(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cx avg = 0.5 * (h(i, j) + std::conj(h(j, i)));
            h(i, j) = avg;
            h(j, i) = std::conj(avg);
        }
    }

    Mat v = Mat::identity(n);
    const double scale = std::max(1.0, h.norm_fro());

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (h.off_diag_norm() <= 1e-14 * scale) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cx hpq = h(p, q);
                const double apq = std::abs(hpq);
                if (apq <= 1e-18 * scale) continue;

                const double app = h(p, p).real();
                const double aqq = h(q, q).real();
                const cx ph = hpq / apq;
                const double tau = (aqq - app) / (2.0 * apq);
                // small root of t^2 - 2*tau*t - 1 = 0
                const double t = (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // U has U(p,p)=c, U(p,q)=-s*ph, U(q,p)=s*conj(ph), U(q,q)=c.
                for (std::size_t i = 0; i < n; ++i) { // H <- H U
                    const cx hp = h(i, p), hq = h(i, q);
                    h(i, p) = hp * c + hq * s * std::conj(ph);
                    h(i, q) = -hp * s * ph + hq * c;
                }
                for (std::size_t j = 0; j < n; ++j) { // H <- U^* H
                    const cx hp = h(p, j), hq = h(q, j);
                    h(p, j) = c * hp + s * ph * hq;
                    h(q, j) = -s * std::conj(ph) * hp + c * hq;
                }
                for (std::size_t i = 0; i < n; ++i) { // V <- V U
                    const cx vp = v(i, p), vq = v(i, q);
                    v(i, p) = vp * c + vq * s * std::conj(ph);
                    v(i, q) = -vp * s * ph + vq * c;
                }
                h(p, q) = 0.0;
                h(q, p) = 0.0;
                h(p, p) = h(p, p).real();
                h(q, q) = h(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return h(a, a).real() < h(b, b).real(); });

    EigenSystem out;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = h(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

Mat pinv_flat(const Mat& m, double rtol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("pinv_flat: matrix must be square");
    const std::size_t n = m.rows();
    const EigenSystem es = jacobi_hermitian(m.dagger() * m);
    const double lmax = es.values.empty() ? 0.0 : *std::max_element(es.values.begin(), es.values.end());
    if (lmax <= 0.0) return Mat(n, n);
    const double cut = rtol * rtol * lmax;

    Mat k(n, n);
    for (std::size_t e = 0; e < n; ++e) {
        if (es.values[e] <= cut) continue;
        const double inv = 1.0 / es.values[e];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                k(i, j) += inv * es.vectors(i, e) * std::conj(es.vectors(j, e));
    }
    return k * m.dagger();
}

std::vector<std::vector<cx>> flat_orthonormalize(const std::vector<std::vector<cx>>& vecs, double rtol) {
    auto dot = [](const std::vector<cx>& a, const std::vector<cx>& b) {
        cx s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
        return s;
    };
    auto nrm = [&](const std::vector<cx>& a) { return std::sqrt(std::abs(dot(a, a))); };

    double scale = 0.0;
    for (const auto& v : vecs) scale = std::max(scale, nrm(v));
    std::vector<std::vector<cx>> basis;
    if (scale == 0.0) return basis;

    for (const auto& v : vecs) {
        std::vector<cx> w = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) {
                const cx c = dot(w, b);
                for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
            }
        const double r = nrm(w);
        if (r > rtol * scale) {
            for (cx& x : w) x /= r;
            basis.push_back(std::move(w));
        }
    }
    return basis;
}

} // namespace semiop
