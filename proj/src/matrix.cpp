#include "extpow/matrix.hpp"

#include "extpow/sparse_solve.hpp"

#include <stdexcept>

namespace extpow {

Mat Mat::identity(const Ring& ring, std::size_t n) {
    Mat m(ring, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ring.one();
    return m;
}

Mat Mat::operator*(const Mat& o) const {
    if (cols_ != o.rows_ || ring_ != o.ring_) throw std::invalid_argument("matrix product shape mismatch");
    Mat out(*ring_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Elem& v = at(i, k);
            if (ring_->is_zero(v)) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                if (ring_->is_zero(o.at(k, j))) continue;
                out.at(i, j) = ring_->add(out.at(i, j), ring_->mul(v, o.at(k, j)));
            }
        }
    }
    return out;
}

Mat Mat::operator+(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || ring_ != o.ring_)
        throw std::invalid_argument("matrix sum shape mismatch");
    Mat out(*ring_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = ring_->add(a_[i], o.a_[i]);
    return out;
}

Mat Mat::operator-(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || ring_ != o.ring_)
        throw std::invalid_argument("matrix difference shape mismatch");
    Mat out(*ring_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = ring_->sub(a_[i], o.a_[i]);
    return out;
}

Mat Mat::scaled(const Elem& c) const {
    Mat out(*ring_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = ring_->mul(a_[i], c);
    return out;
}

namespace {

template <class Ops>
SolutionSpace solve_with(const Mat& system, Ops ops,
                         typename Ops::value_type (*to_v)(const Elem&, const Ops&),
                         Elem (*from_v)(const typename Ops::value_type&, const Ring&)) {
    const Ring& field = system.ring();
    SparseEliminator<Ops> elim(static_cast<int>(system.cols()), ops);
    for (std::size_t r = 0; r < system.rows(); ++r) {
        typename SparseEliminator<Ops>::Row row;
        for (std::size_t c = 0; c < system.cols(); ++c) {
            if (field.is_zero(system.at(r, c))) continue;
            row.push_back({static_cast<int>(c), to_v(system.at(r, c), ops)});
        }
        elim.add_row(std::move(row));
    }
    SolutionSpace out;
    out.ambient_dim = system.cols();
    out.field = &field;
    for (auto& vec : elim.kernel_basis()) {
        std::vector<Elem> b;
        b.reserve(vec.size());
        for (auto& v : vec) b.push_back(from_v(v, field));
        out.basis.push_back(std::move(b));
    }
    return out;
}

std::uint64_t elem_to_fp(const Elem& e, const FpOps&) {
    return e.as_mod().r.convert_to<std::uint64_t>();
}
Elem fp_to_elem(const std::uint64_t& v, const Ring& field) {
    return field.from_Int(Int(v));
}
Rat elem_to_rat(const Elem& e, const RatOps&) { return e.as_rat(); }
Elem rat_to_elem(const Rat& v, const Ring& field) { return Elem(&field, v); }
Elem elem_to_elem_id(const Elem& e, const ElemOps&) { return e; }
Elem elem_from_elem_id(const Elem& v, const Ring&) { return v; }

}  // namespace

SolutionSpace solve_homogeneous(const Mat& system) {
    const Ring& field = system.ring();
    if (!field.is_field())
        throw UnsupportedRingError("solve_homogeneous needs a field, got " + field.token());
    if (field.kind() == RingKind::Rationals)
        return solve_with<RatOps>(system, RatOps{}, &elem_to_rat, &rat_to_elem);
    if (field.kind() == RingKind::Modular && field.modulus() < Int(1) << 32) {
        FpOps ops{field.modulus().convert_to<std::uint64_t>()};
        return solve_with<FpOps>(system, ops, &elem_to_fp, &fp_to_elem);
    }
    return solve_with<ElemOps>(system, ElemOps{&field}, &elem_to_elem_id, &elem_from_elem_id);
}

bool solution_space_satisfies(const SolutionSpace& space, const Mat& system) {
    const Ring& field = system.ring();
    for (const auto& vec : space.basis) {
        if (vec.size() != system.cols()) return false;
        for (std::size_t r = 0; r < system.rows(); ++r) {
            Elem acc = field.zero();
            for (std::size_t c = 0; c < system.cols(); ++c)
                acc = field.add(acc, field.mul(system.at(r, c), vec[c]));
            if (!field.is_zero(acc)) return false;
        }
    }
    return true;
}

Elem det_gauss(const Mat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    const Ring& f = m.ring();
    Mat w = m;
    std::size_t n = m.rows();
    Elem d = f.one();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && f.is_zero(w.at(piv, k))) ++piv;
        if (piv == n) return f.zero();
        if (piv != k) {
            for (std::size_t c = k; c < n; ++c) std::swap(w.at(k, c), w.at(piv, c));
            d = f.neg(d);
        }
        d = f.mul(d, w.at(k, k));
        Elem inv = f.inv(w.at(k, k));
        for (std::size_t r = k + 1; r < n; ++r) {
            if (f.is_zero(w.at(r, k))) continue;
            Elem factor = f.mul(w.at(r, k), inv);
            for (std::size_t c = k; c < n; ++c)
                w.at(r, c) = f.sub(w.at(r, c), f.mul(factor, w.at(k, c)));
        }
    }
    return d;
}

Elem det_bareiss(const Mat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    const Ring& R = m.ring();
    Mat w = m;
    std::size_t n = m.rows();
    if (n == 0) return R.one();
    Elem prev = R.one();
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t piv = k;
        while (piv < n && R.is_zero(w.at(piv, k))) ++piv;
        if (piv == n) return R.zero();
        if (piv != k) {
            for (std::size_t c = k; c < n; ++c) std::swap(w.at(k, c), w.at(piv, c));
            sign = -sign;
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            for (std::size_t c = k + 1; c < n; ++c) {
                Elem num = R.sub(R.mul(w.at(r, c), w.at(k, k)), R.mul(w.at(r, k), w.at(k, c)));
                w.at(r, c) = R.exact_div(num, prev);
            }
            w.at(r, k) = R.zero();
        }
        prev = w.at(k, k);
    }
    Elem d = w.at(n - 1, n - 1);
    return sign < 0 ? R.neg(d) : d;
}

Elem det_berkowitz(const Mat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    const Ring& R = m.ring();
    std::size_t n = m.rows();
    if (n == 0) return R.one();
    // Iteratively build the characteristic polynomial coefficient vector of
    // the leading principal submatrices (division-free Samuelson-Berkowitz).
    std::vector<Elem> q = {R.one(), R.neg(m.at(0, 0))};
    for (std::size_t i = 1; i < n; ++i) {
        // Toeplitz column: [1, -A[i][i], -(R S), -(R M S), -(R M^2 S), ...]
        std::vector<Elem> t(i + 2, R.zero());
        t[0] = R.one();
        t[1] = R.neg(m.at(i, i));
        std::vector<Elem> v(i);
        for (std::size_t r = 0; r < i; ++r) v[r] = m.at(r, i);
        for (std::size_t k = 0; k + 2 <= i + 1; ++k) {
            Elem dot = R.zero();
            for (std::size_t c = 0; c < i; ++c) dot = R.add(dot, R.mul(m.at(i, c), v[c]));
            t[k + 2] = R.neg(dot);
            if (k + 3 > i + 1) break;
            std::vector<Elem> nv(i, R.zero());
            for (std::size_t r = 0; r < i; ++r)
                for (std::size_t c = 0; c < i; ++c)
                    nv[r] = R.add(nv[r], R.mul(m.at(r, c), v[c]));
            v = std::move(nv);
        }
        std::vector<Elem> nq(i + 2, R.zero());
        for (std::size_t a = 0; a < t.size(); ++a) {
            if (R.is_zero(t[a])) continue;
            for (std::size_t b = 0; b < q.size(); ++b) {
                if (a + b >= nq.size()) continue;
                nq[a + b] = R.add(nq[a + b], R.mul(t[a], q[b]));
            }
        }
        q = std::move(nq);
    }
    // q holds char(A)(x) = det(xI - A) coefficients, leading first; det(A) =
    // (-1)^n * char(0).
    Elem c0 = q.back();
    return (n % 2 == 1) ? R.neg(c0) : c0;
}

Elem det(const Mat& m) {
    const Ring& R = m.ring();
    if (R.is_field()) return det_gauss(m);
    if (R.is_domain()) return det_bareiss(m);
    return det_berkowitz(m);
}

std::size_t rank_field(const Mat& m) {
    const Ring& f = m.ring();
    if (!f.is_field()) throw UnsupportedRingError("rank needs a field, got " + f.token());
    Mat w = m;
    std::size_t rank = 0;
    std::size_t rowstart = 0;
    for (std::size_t col = 0; col < w.cols() && rowstart < w.rows(); ++col) {
        std::size_t piv = rowstart;
        while (piv < w.rows() && f.is_zero(w.at(piv, col))) ++piv;
        if (piv == w.rows()) continue;
        if (piv != rowstart)
            for (std::size_t c = col; c < w.cols(); ++c) std::swap(w.at(rowstart, c), w.at(piv, c));
        Elem inv = f.inv(w.at(rowstart, col));
        for (std::size_t r = rowstart + 1; r < w.rows(); ++r) {
            if (f.is_zero(w.at(r, col))) continue;
            Elem factor = f.mul(w.at(r, col), inv);
            for (std::size_t c = col; c < w.cols(); ++c)
                w.at(r, c) = f.sub(w.at(r, c), f.mul(factor, w.at(rowstart, c)));
        }
        ++rank;
        ++rowstart;
    }
    return rank;
}

std::optional<Mat> inverse_field(const Mat& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    const Ring& f = m.ring();
    if (!f.is_field()) throw UnsupportedRingError("inverse needs a field, got " + f.token());
    std::size_t n = m.rows();
    Mat w = m;
    Mat inv = Mat::identity(f, n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && f.is_zero(w.at(piv, k))) ++piv;
        if (piv == n) return std::nullopt;
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(w.at(k, c), w.at(piv, c));
                std::swap(inv.at(k, c), inv.at(piv, c));
            }
        }
        Elem pinv = f.inv(w.at(k, k));
        for (std::size_t c = 0; c < n; ++c) {
            w.at(k, c) = f.mul(w.at(k, c), pinv);
            inv.at(k, c) = f.mul(inv.at(k, c), pinv);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == k || f.is_zero(w.at(r, k))) continue;
            Elem factor = w.at(r, k);
            for (std::size_t c = 0; c < n; ++c) {
                w.at(r, c) = f.sub(w.at(r, c), f.mul(factor, w.at(k, c)));
                inv.at(r, c) = f.sub(inv.at(r, c), f.mul(factor, inv.at(k, c)));
            }
        }
    }
    return inv;
}

}  // namespace extpow
