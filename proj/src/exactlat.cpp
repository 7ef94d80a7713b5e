#include "gkpsis/exactlat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gkpsis::exactlat {

namespace {

using RatRow = std::vector<Rat>;
using RatMat = std::vector<RatRow>;

Int dot_rows(const IntBasis& b, int i, int j) {
    Int s = 0;
    for (int t = 0; t < b.cols(); ++t) s += b.at(i, t) * b.at(j, t);
    return s;
}

// Exact inverse by Gauss-Jordan; throws on singular input.
RatMat rat_inverse(const IntBasis& b) {
    if (b.rows() != b.cols()) throw std::invalid_argument("matrix not square");
    int n = b.rows();
    RatMat a(n, RatRow(2 * n, Rat(0)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = Rat(b.at(i, j));
        a[i][n + i] = 1;
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (sgn(a[r][col]) != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw std::invalid_argument("matrix singular");
        std::swap(a[col], a[piv]);
        Rat inv = 1 / a[col][col];
        for (int j = 0; j < 2 * n; ++j) a[col][j] *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == col || sgn(a[r][col]) == 0) continue;
            Rat f = a[r][col];
            for (int j = 0; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
        }
    }
    RatMat out(n, RatRow(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i][j] = a[i][n + j];
    return out;
}

struct Gso {
    RatMat mu;              // lower triangular, mu[i][j] for j < i
    std::vector<Rat> bsq;   // |b*_i|^2
};

Gso gso_of(const IntBasis& b) {
    int d = b.rows();
    Gso g;
    g.mu.assign(d, RatRow(d, Rat(0)));
    g.bsq.assign(d, Rat(0));
    RatMat r(d, RatRow(d, Rat(0)));  // r[i][j] = <b_i, b*_j>
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j <= i; ++j) {
            Rat s = Rat(dot_rows(b, i, j));
            for (int t = 0; t < j; ++t) s -= g.mu[j][t] * r[i][t];
            r[i][j] = s;
            if (j < i) {
                if (sgn(g.bsq[j]) == 0) throw std::invalid_argument("rank-deficient basis");
                g.mu[i][j] = s / g.bsq[j];
            }
        }
        g.bsq[i] = r[i][i];
        if (sgn(g.bsq[i]) == 0) throw std::invalid_argument("rank-deficient basis");
    }
    return g;
}

// Shared LLL state operating on rows of b and the transform h.
struct LllState {
    IntBasis b, h;
    Gso g;

    void red(int k, int l) {
        Rat half(1, 2);
        if (abs(g.mu[k][l]) <= half) return;
        Int q = round_nearest(g.mu[k][l]);
        for (int t = 0; t < b.cols(); ++t) b.at(k, t) -= q * b.at(l, t);
        for (int t = 0; t < h.cols(); ++t) h.at(k, t) -= q * h.at(l, t);
        g.mu[k][l] -= Rat(q);
        for (int i = 0; i < l; ++i) g.mu[k][i] -= Rat(q) * g.mu[l][i];
    }

    void swap_rows(int k) {
        int d = b.rows();
        for (int t = 0; t < b.cols(); ++t) std::swap(b.at(k, t), b.at(k - 1, t));
        for (int t = 0; t < h.cols(); ++t) std::swap(h.at(k, t), h.at(k - 1, t));
        for (int j = 0; j < k - 1; ++j) std::swap(g.mu[k][j], g.mu[k - 1][j]);
        Rat m = g.mu[k][k - 1];
        Rat bb = g.bsq[k] + m * m * g.bsq[k - 1];
        g.mu[k][k - 1] = m * g.bsq[k - 1] / bb;
        Rat newbk = g.bsq[k - 1] * g.bsq[k] / bb;
        g.bsq[k - 1] = bb;
        g.bsq[k] = newbk;
        for (int i = k + 1; i < d; ++i) {
            Rat t = g.mu[i][k];
            g.mu[i][k] = g.mu[i][k - 1] - m * t;
            g.mu[i][k - 1] = t + g.mu[k][k - 1] * g.mu[i][k];
        }
    }
};

}  // namespace

IntBasis IntBasis::mul(const IntBasis& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("shape mismatch in mul");
    IntBasis r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Int& v = at(i, k);
            if (sgn(v) == 0) continue;
            for (int j = 0; j < o.cols_; ++j) r.at(i, j) += v * o.at(k, j);
        }
    return r;
}

IntBasis IntBasis::transposed() const {
    IntBasis r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

Int IntBasis::det() const {
    if (rows_ != cols_) throw std::invalid_argument("det of non-square matrix");
    int n = rows_;
    if (n == 0) return 1;
    IntBasis m = *this;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (sgn(m.at(k, k)) == 0) {
            int piv = -1;
            for (int r = k + 1; r < n; ++r)
                if (sgn(m.at(r, k)) != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) return 0;
            for (int t = 0; t < n; ++t) std::swap(m.at(k, t), m.at(piv, t));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                Int v = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m.at(i, j) = v;
            }
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : Int(-m.at(n - 1, n - 1));
}

IntBasis symplectic_j(int half_dim) {
    IntBasis j(2 * half_dim, 2 * half_dim);
    for (int i = 0; i < half_dim; ++i) {
        j.at(i, half_dim + i) = 1;
        j.at(half_dim + i, i) = -1;
    }
    return j;
}

bool is_q_symplectic(const IntBasis& m, const Int& q) {
    if (m.rows() != m.cols()) throw std::invalid_argument("non-square matrix");
    if (m.rows() % 2 != 0) throw std::invalid_argument("odd dimension has no symplectic form");
    IntBasis j = symplectic_j(m.rows() / 2);
    IntBasis lhs = m.mul(j).mul(m.transposed());
    for (int a = 0; a < m.rows(); ++a)
        for (int b = 0; b < m.cols(); ++b)
            if (lhs.at(a, b) != q * j.at(a, b)) return false;
    return true;
}

GramSchmidtData gram_schmidt(const IntBasis& b) {
    Gso g = gso_of(b);
    GramSchmidtData out;
    out.b_star_norms_sq = std::move(g.bsq);
    out.mu.resize(b.rows());
    for (int i = 0; i < b.rows(); ++i)
        out.mu[i] = std::vector<Rat>(g.mu[i].begin(), g.mu[i].begin() + i);
    return out;
}

LllResult lll_reduce_with_transform(const IntBasis& b, const Rat& delta) {
    if (delta <= Rat(1, 4) || delta > 1) throw std::invalid_argument("delta outside (1/4, 1]");
    LllState st{b, IntBasis::identity(b.rows()), gso_of(b)};
    int d = b.rows();
    int k = 1;
    while (k < d) {
        st.red(k, k - 1);
        Rat lhs = st.g.bsq[k];
        Rat rhs = (delta - st.g.mu[k][k - 1] * st.g.mu[k][k - 1]) * st.g.bsq[k - 1];
        if (lhs < rhs) {
            st.swap_rows(k);
            k = std::max(k - 1, 1);
        } else {
            for (int l = k - 2; l >= 0; --l) st.red(k, l);
            ++k;
        }
    }
    return LllResult{std::move(st.b), std::move(st.h)};
}

ScaledLattice lll_reduce(const ScaledLattice& l, const Rat& delta) {
    return ScaledLattice{lll_reduce_with_transform(l.basis, delta).reduced, l.scale_sq};
}

namespace {

// Exact Fincke-Pohst over a reduced basis: rational zig-zag interval tests,
// squared norms throughout. Collects every vector attaining the minimum.
struct SvpEnum {
    const Gso& g;
    int d;
    Rat budget;                           // current best squared norm
    std::vector<Int> x;                   // coordinates, filled top-down
    std::vector<std::vector<Int>> best;   // all minimal coordinate vectors
    bool found = false;

    SvpEnum(const Gso& gg, int dd, Rat init) : g(gg), d(dd), budget(std::move(init)), x(dd, Int(0)) {}

    void leaf(const Rat& norm) {
        bool zero = std::all_of(x.begin(), x.end(), [](const Int& v) { return sgn(v) == 0; });
        if (zero) return;
        if (!found || norm < budget) {
            budget = norm;
            best.clear();
            found = true;
        }
        best.push_back(x);
    }

    void descend(int i, const Rat& acc, bool prefix_zero) {
        if (i < 0) {
            leaf(acc);
            return;
        }
        Rat c(0);
        for (int j = i + 1; j < d; ++j)
            if (sgn(x[j]) != 0) c -= g.mu[j][i] * Rat(x[j]);
        Int x0 = prefix_zero ? Int(0) : round_nearest(c);
        auto step = [&](const Int& xi) -> bool {
            Rat diff = Rat(xi) - c;
            Rat term = acc + diff * diff * g.bsq[i];
            if (term > budget) return false;
            x[i] = xi;
            descend(i - 1, term, prefix_zero && sgn(xi) == 0);
            return true;
        };
        if (!step(x0) ) return;
        for (Int s = 1;; ++s) {
            bool up = step(x0 + s);
            bool down = prefix_zero ? false : step(x0 - s);
            if (!up && !down) break;
        }
    }
};

std::vector<Int> mul_row_matrix(const std::vector<Int>& v, const IntBasis& m) {
    std::vector<Int> out(m.cols(), Int(0));
    for (int i = 0; i < m.rows(); ++i) {
        if (sgn(v[i]) == 0) continue;
        for (int j = 0; j < m.cols(); ++j) out[j] += v[i] * m.at(i, j);
    }
    return out;
}

// Sign normalization: first nonzero coordinate positive.
void normalize_sign(std::vector<Int>& v) {
    for (const Int& c : v) {
        if (sgn(c) == 0) continue;
        if (sgn(c) < 0)
            for (Int& t : v) t = -t;
        return;
    }
}

bool lex_less(const std::vector<Int>& a, const std::vector<Int>& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

}  // namespace

ShortestVec shortest_vector(const ScaledLattice& l) {
    int d = l.basis.rows();
    if (d > kMaxEnumDim) throw std::invalid_argument("dimension exceeds enumeration cap");
    if (d == 0) throw std::invalid_argument("empty basis");
    // Stronger internal reduction keeps the enumeration tree small; the result
    // is exact either way.
    LllResult red = lll_reduce_with_transform(l.basis, Rat(99, 100));
    Gso g = gso_of(red.reduced);
    Rat init = Rat(dot_rows(red.reduced, 0, 0));
    for (int i = 1; i < d; ++i) init = std::min(init, Rat(dot_rows(red.reduced, i, i)));
    SvpEnum en(g, d, init);
    en.descend(d - 1, Rat(0), true);
    // Map to input-basis coordinates, normalize sign, pick the lexicographic least.
    std::vector<Int> pick;
    for (auto& cand : en.best) {
        std::vector<Int> c = mul_row_matrix(cand, red.transform);
        normalize_sign(c);
        if (pick.empty() || lex_less(c, pick)) pick = std::move(c);
    }
    return ShortestVec{std::move(pick), en.budget * l.scale_sq};
}

namespace {

struct DGso {
    std::vector<std::vector<double>> mu;
    std::vector<double> bsq;
    std::vector<std::vector<double>> bstar;  // only filled when rows are needed
};

DGso dgso_of(const std::vector<std::vector<double>>& rows, bool keep_rows) {
    int d = static_cast<int>(rows.size());
    int m = static_cast<int>(rows[0].size());
    DGso g;
    g.mu.assign(d, std::vector<double>(d, 0.0));
    g.bsq.assign(d, 0.0);
    std::vector<std::vector<double>> bs(rows);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < i; ++j) {
            double num = 0;
            for (int t = 0; t < m; ++t) num += rows[i][t] * bs[j][t];
            double mu = num / g.bsq[j];
            g.mu[i][j] = mu;
            for (int t = 0; t < m; ++t) bs[i][t] -= mu * bs[j][t];
        }
        double n2 = 0;
        for (int t = 0; t < m; ++t) n2 += bs[i][t] * bs[i][t];
        g.bsq[i] = n2;
        if (!(n2 > 0)) throw std::invalid_argument("rank-deficient basis");
    }
    if (keep_rows) g.bstar = std::move(bs);
    return g;
}

std::vector<std::vector<double>> scaled_rows(const IntBasis& b, double alpha) {
    std::vector<std::vector<double>> rows(b.rows(), std::vector<double>(b.cols()));
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) rows[i][j] = to_double(b.at(i, j)) * alpha;
    return rows;
}

// Solve x * rows = target for square full-rank rows (row-vector convention).
std::vector<double> solve_coords(const std::vector<std::vector<double>>& rows,
                                 std::span<const double> target) {
    int n = static_cast<int>(rows.size());
    if (static_cast<int>(rows[0].size()) != n)
        throw std::invalid_argument("target solve needs a square basis");
    // Columns of the system matrix are the basis rows.
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = rows[j][i];
        a[i][n] = target[i];
    }
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        if (a[c][c] == 0) throw std::invalid_argument("singular basis");
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            double f = a[r][c] / a[c][c];
            if (f == 0) continue;
            for (int j = c; j <= n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    return x;
}

std::vector<double> babai_on_rows(const std::vector<std::vector<double>>& rows, const DGso& g,
                                  std::span<const double> target) {
    int d = static_cast<int>(rows.size());
    int m = static_cast<int>(rows[0].size());
    std::vector<double> rem(target.begin(), target.end());
    std::vector<double> x(d);
    for (int i = d - 1; i >= 0; --i) {
        double num = 0;
        for (int t = 0; t < m; ++t) num += rem[t] * g.bstar[i][t];
        // ties round half away from zero
        x[i] = std::round(num / g.bsq[i]);
        for (int t = 0; t < m; ++t) rem[t] -= x[i] * rows[i][t];
    }
    return x;
}

struct CvpEnum {
    const DGso& g;
    const std::vector<double>& tau;
    int d;
    double best;
    double tol;
    std::vector<long long> x;
    std::vector<std::vector<long long>> cands;
    std::vector<double> cand_dist;

    CvpEnum(const DGso& gg, const std::vector<double>& t, int dd, double init)
        : g(gg), tau(t), d(dd), best(init), x(dd, 0) {
        tol = 1e-9 * (1.0 + best);
    }

    void leaf(double dist) {
        if (dist < best - tol) {
            best = dist;
            tol = 1e-9 * (1.0 + best);
            cands.clear();
            cand_dist.clear();
        }
        cands.push_back(x);
        cand_dist.push_back(dist);
    }

    void descend(int i, double acc) {
        if (i < 0) {
            leaf(acc);
            return;
        }
        double c = tau[i];
        for (int j = i + 1; j < d; ++j) c += (tau[j] - static_cast<double>(x[j])) * g.mu[j][i];
        long long x0 = static_cast<long long>(std::round(c));
        auto step = [&](long long xi) -> bool {
            double diff = static_cast<double>(xi) - c;
            double term = acc + diff * diff * g.bsq[i];
            if (term > best + tol) return false;
            x[i] = xi;
            descend(i - 1, term);
            return true;
        };
        if (!step(x0)) return;
        for (long long s = 1;; ++s) {
            bool up = step(x0 + s);
            bool down = step(x0 - s);
            if (!up && !down) break;
        }
    }
};

}  // namespace

ClosestVec closest_vector(const ScaledLattice& l, std::span<const double> target) {
    int d = l.basis.rows();
    if (d > kMaxEnumDim) throw std::invalid_argument("dimension exceeds enumeration cap");
    if (static_cast<int>(target.size()) != l.basis.cols())
        throw std::invalid_argument("target length mismatch");
    LllResult red = lll_reduce_with_transform(l.basis, Rat(99, 100));
    double alpha = std::sqrt(to_double(l.scale_sq));
    auto rows = scaled_rows(red.reduced, alpha);
    DGso g = dgso_of(rows, true);
    std::vector<double> tau = solve_coords(rows, target);
    // Babai seed for the initial radius.
    std::vector<double> xb = babai_on_rows(rows, g, target);
    double seed_dist = 0;
    {
        std::vector<double> diff(target.begin(), target.end());
        for (int i = 0; i < d; ++i)
            for (int t = 0; t < l.basis.cols(); ++t) diff[t] -= xb[i] * rows[i][t];
        for (double v : diff) seed_dist += v * v;
    }
    CvpEnum en(g, tau, d, seed_dist);
    en.descend(d - 1, 0.0);
    // Map candidates to input coordinates; lexicographic least among ties.
    std::vector<Int> pick;
    double pick_dist = 0;
    for (size_t c = 0; c < en.cands.size(); ++c) {
        if (en.cand_dist[c] > en.best + en.tol) continue;
        std::vector<Int> xi(d);
        for (int i = 0; i < d; ++i) xi[i] = Int(static_cast<long>(en.cands[c][i]));
        std::vector<Int> mapped = mul_row_matrix(xi, red.transform);
        if (pick.empty() || lex_less(mapped, pick)) {
            pick = std::move(mapped);
            pick_dist = en.cand_dist[c];
        }
    }
    return ClosestVec{std::move(pick), pick_dist};
}

std::vector<Int> babai_nearest_plane(const ScaledLattice& l, std::span<const double> target) {
    if (static_cast<int>(target.size()) != l.basis.cols())
        throw std::invalid_argument("target length mismatch");
    double alpha = std::sqrt(to_double(l.scale_sq));
    auto rows = scaled_rows(l.basis, alpha);
    DGso g = dgso_of(rows, true);
    std::vector<double> x = babai_on_rows(rows, g, target);
    std::vector<Int> out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = Int(static_cast<long>(x[i]));
    return out;
}

ScaledLattice symplectic_dual_basis(const ScaledLattice& l) {
    const IntBasis& b = l.basis;
    if (b.rows() != b.cols()) throw std::invalid_argument("dual needs a square basis");
    if (b.rows() % 2 != 0) throw std::invalid_argument("odd dimension has no symplectic form");
    int n = b.rows();
    RatMat binv = rat_inverse(b);
    IntBasis jt = symplectic_j(n / 2).transposed();
    // B^x = B^-T J^T, rational; clear denominators into an integer basis.
    RatMat dual(n, RatRow(n, Rat(0)));
    Int den = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rat s(0);
            for (int t = 0; t < n; ++t)
                if (sgn(jt.at(t, j)) != 0) s += binv[t][i] * Rat(jt.at(t, j));
            dual[i][j] = s;
            Int d;
            mpz_lcm(d.get_mpz_t(), den.get_mpz_t(), s.get_den().get_mpz_t());
            den = d;
        }
    IntBasis out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rat v = dual[i][j] * Rat(den);
            out.at(i, j) = v.get_num();  // denominator 1 by construction
        }
    Rat scale = Rat(1) / (l.scale_sq * Rat(den * den));
    scale.canonicalize();
    return ScaledLattice{std::move(out), scale};
}

bool lattice_contains(const ScaledLattice& sub, std::span<const Int> coords_in_super,
                      const ScaledLattice& super) {
    if (static_cast<int>(coords_in_super.size()) != super.basis.rows())
        throw std::invalid_argument("coordinate length mismatch");
    if (super.basis.cols() != sub.basis.cols()) throw std::invalid_argument("ambient mismatch");
    Rat ratio_sq = super.scale_sq / sub.scale_sq;
    ratio_sq.canonicalize();
    Rat ratio;
    if (!rat_sqrt_exact(ratio_sq, ratio)) throw std::invalid_argument("incommensurate scales");
    std::vector<Int> v(coords_in_super.begin(), coords_in_super.end());
    std::vector<Int> w = mul_row_matrix(v, super.basis);
    RatMat binv = rat_inverse(sub.basis);
    int n = sub.basis.rows();
    for (int j = 0; j < n; ++j) {
        Rat xj(0);
        for (int t = 0; t < n; ++t)
            if (sgn(w[t]) != 0) xj += Rat(w[t]) * binv[t][j];
        xj *= ratio;
        xj.canonicalize();
        if (xj.get_den() != 1) return false;
    }
    return true;
}

}  // namespace gkpsis::exactlat
