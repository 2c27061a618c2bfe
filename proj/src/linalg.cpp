#include "lsikit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lsikit/error.hpp"

namespace lsikit {
namespace {

constexpr int kMaxSweeps = 100;

void check_symmetric(const DenseMatrix& h) {
    if (h.rows() != h.cols()) {
        throw InvalidArgument("symmetric eigendecomposition needs a square matrix, got " + std::to_string(h.rows()) +
                              "x" + std::to_string(h.cols()));
    }
    double scale = 1.0;
    for (double v : h.values()) scale = std::max(scale, std::abs(v));
    double worst = 0.0;
    std::size_t wi = 0, wj = 0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        for (std::size_t j = i + 1; j < h.cols(); ++j) {
            const double d = std::abs(h(i, j) - h(j, i));
            if (d > worst) {
                worst = d;
                wi = i;
                wj = j;
            }
        }
    }
    if (worst > 1e-10 * scale) {
        std::ostringstream os;
        os << "matrix is not symmetric: |h(" << wi << "," << wj << ") - h(" << wj << "," << wi << ")| = " << worst;
        throw InvalidArgument(os.str());
    }
}

// Rows of the returned matrix are eigenvectors (unsorted), diag(a) the eigenvalues.
struct JacobiResult {
    std::vector<double> diag;
    DenseMatrix vectors_by_row;
};

JacobiResult cyclic_jacobi(DenseMatrix a) {
    const std::size_t n = a.rows();
    DenseMatrix vt = DenseMatrix::identity(n);
    // Work on the exactly symmetric part.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));

    const double total = frobenius_norm(a);
    for (int sweep = 0;; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        off = std::sqrt(2.0 * off);
        if (off <= 1e-15 * total || off == 0.0) break;
        if (sweep == kMaxSweeps) throw Error("Jacobi eigensolver did not converge");

        // Early sweeps skip small pivots; later sweeps only skip negligible ones.
        const double threshold = sweep < 3 ? 0.2 * off / static_cast<double>(n * n) : 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                const double g = 100.0 * std::abs(apq);
                if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
                    std::abs(a(q, q)) + g == std::abs(a(q, q))) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                if (std::abs(apq) <= threshold || apq == 0.0) continue;

                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    const double np = c * akp - s * akq;
                    const double nq = s * akp + c * akq;
                    a(k, p) = a(p, k) = np;
                    a(k, q) = a(q, k) = nq;
                }
                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = a(q, p) = 0.0;

                auto vp = vt.row(p);
                auto vq = vt.row(q);
                for (std::size_t k = 0; k < n; ++k) {
                    const double x = vp[k];
                    const double y = vq[k];
                    vp[k] = c * x - s * y;
                    vq[k] = s * x + c * y;
                }
            }
        }
    }
    JacobiResult out;
    out.diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.diag[i] = a(i, i);
    out.vectors_by_row = std::move(vt);
    return out;
}

void fix_sign(std::span<double> v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    if (!v.empty() && v[best] < 0.0)
        for (double& x : v) x = -x;
}

EigenPairs sorted_pairs(const JacobiResult& jr, std::size_t k) {
    const std::size_t n = jr.diag.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return jr.diag[x] > jr.diag[y]; });
    EigenPairs out;
    out.values.resize(k);
    out.vectors = DenseMatrix(n, k);
    std::vector<double> v(n);
    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t src = order[c];
        out.values[c] = jr.diag[src];
        auto row = jr.vectors_by_row.row(src);
        std::copy(row.begin(), row.end(), v.begin());
        fix_sign(v);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, c) = v[i];
    }
    return out;
}

// Modified Gram-Schmidt (two passes) over the columns of q, in order.
// Columns flagged in `replace` are rebuilt from canonical basis vectors.
void orthonormalize_columns(DenseMatrix& q, const std::vector<bool>& replace) {
    const std::size_t m = q.rows();
    const std::size_t k = q.cols();
    std::vector<double> col(m);
    std::size_t next_basis = 0;
    auto project_out = [&](std::size_t upto) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < upto; ++j) {
                double d = 0.0;
                for (std::size_t i = 0; i < m; ++i) d += q(i, j) * col[i];
                for (std::size_t i = 0; i < m; ++i) col[i] -= d * q(i, j);
            }
        }
    };
    for (std::size_t c = 0; c < k; ++c) {
        double nrm = 0.0;
        if (!replace[c]) {
            for (std::size_t i = 0; i < m; ++i) col[i] = q(i, c);
            project_out(c);
            nrm = norm2(col);
        }
        while (replace[c] || nrm < 1e-8) {
            if (next_basis >= m) throw Error("orthonormal completion ran out of basis vectors");
            std::fill(col.begin(), col.end(), 0.0);
            col[next_basis++] = 1.0;
            project_out(c);
            nrm = norm2(col);
            if (nrm > 0.5) break;
        }
        for (std::size_t i = 0; i < m; ++i) q(i, c) = col[i] / nrm;
    }
}

SvdFactors svd_from_gram(const SparseMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const bool use_columns = n <= m;  // eigendecompose the smaller Gram matrix
    const SparseMatrix at = use_columns ? SparseMatrix() : a.transposed();
    const SparseMatrix& base = use_columns ? a : at;  // base has the smaller column count
    const std::size_t k = std::min(m, n);

    EigenPairs eig = sorted_pairs(cyclic_jacobi(gram_of_columns(base)), k);
    DenseMatrix projected = multiply(base, eig.vectors);  // columns: base·v_k = σ_k·u_k

    std::vector<double> sigma(k);
    for (std::size_t c = 0; c < k; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < projected.rows(); ++i) s += projected(i, c) * projected(i, c);
        sigma[c] = std::sqrt(s);
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    const double cutoff = (k > 0 ? sigma[order[0]] : 0.0) * 1e-13 * static_cast<double>(std::max(m, n));
    DenseMatrix other(projected.rows(), k);
    DenseMatrix same(base.cols(), k);
    std::vector<double> values(k);
    std::vector<bool> replace(k, false);
    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t src = order[c];
        const double s = sigma[src];
        const bool zero = !(s > cutoff);
        values[c] = zero ? 0.0 : s;
        replace[c] = zero;
        for (std::size_t i = 0; i < base.cols(); ++i) same(i, c) = eig.vectors(i, src);
        for (std::size_t i = 0; i < projected.rows(); ++i) other(i, c) = zero ? 0.0 : projected(i, src) / s;
    }
    orthonormalize_columns(other, replace);

    SvdFactors f;
    f.values = std::move(values);
    if (use_columns) {
        f.left = std::move(other);
        f.right = std::move(same);
    } else {
        f.left = std::move(same);
        f.right = std::move(other);
    }
    return f;
}

}  // namespace

EigenPairs symmetric_eigen(const DenseMatrix& h) {
    check_symmetric(h);
    return sorted_pairs(cyclic_jacobi(h), h.rows());
}

EigenPairs symmetric_eigen_topk(const DenseMatrix& h, std::size_t k) {
    check_symmetric(h);
    if (k < 1 || k > h.rows()) {
        throw InvalidArgument("symmetric_eigen_topk: k = " + std::to_string(k) + " outside [1, " +
                              std::to_string(h.rows()) + "]");
    }
    return sorted_pairs(cyclic_jacobi(h), k);
}

SvdFactors full_svd(const SparseMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) throw InvalidArgument("full_svd: empty matrix");
    return svd_from_gram(a);
}

SvdFactors full_svd(const DenseMatrix& a) { return full_svd(SparseMatrix::from_dense(a)); }

SvdFactors truncate(const SvdFactors& full, std::size_t k) {
    if (k < 1 || k > full.rank()) {
        throw InvalidArgument("truncate: rank " + std::to_string(k) + " outside [1, " + std::to_string(full.rank()) +
                              "]");
    }
    SvdFactors out;
    out.left = full.left.left_columns(k);
    out.right = full.right.left_columns(k);
    out.values.assign(full.values.begin(), full.values.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

SvdFactors truncated_svd(const SparseMatrix& a, std::size_t k) {
    const std::size_t limit = std::min(a.rows(), a.cols());
    if (k < 1 || k > limit) {
        throw InvalidArgument("truncated_svd: rank " + std::to_string(k) + " outside [1, " + std::to_string(limit) +
                              "]");
    }
    return truncate(full_svd(a), k);
}

SvdFactors truncated_svd(const DenseMatrix& a, std::size_t k) { return truncated_svd(SparseMatrix::from_dense(a), k); }

DenseMatrix rank_k_reconstruct(const SvdFactors& f) {
    const std::size_t k = f.values.size();
    if (f.left.cols() != k || f.right.cols() != k) {
        throw ShapeError("rank_k_reconstruct: factor shapes disagree (left has " + std::to_string(f.left.cols()) +
                         " columns, right " + std::to_string(f.right.cols()) + ", values " + std::to_string(k) + ")");
    }
    DenseMatrix scaled = f.left;
    for (std::size_t i = 0; i < scaled.rows(); ++i)
        for (std::size_t c = 0; c < k; ++c) scaled(i, c) *= f.values[c];
    return multiply(scaled, f.right.transposed());
}

double orthonormality_error(const DenseMatrix& q) {
    const DenseMatrix g = multiply_at_b(q, q);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
    return worst;
}

}  // namespace lsikit
