#pragma once

#include <span>
#include <vector>

#include "gkpsis/arith.hpp"

namespace gkpsis::exactlat {

// Dimension cap for exact enumeration; constructions above it are refused.
inline constexpr int kMaxEnumDim = 32;

// Dense integer matrix, row-major. Lattice bases are row bases: the lattice is
// the set of integer row combinations.
class IntBasis {
  public:
    IntBasis() = default;
    IntBasis(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static IntBasis identity(int n) {
        IntBasis b(n, n);
        for (int i = 0; i < n; ++i) b.at(i, i) = 1;
        return b;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Int& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const IntBasis& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    IntBasis mul(const IntBasis& o) const;
    IntBasis transposed() const;
    Int det() const;  // Bareiss fraction-free elimination; square only

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

// alpha * L(basis) with alpha = sqrt(scale_sq); scale kept squared so it stays rational.
struct ScaledLattice {
    IntBasis basis;
    Rat scale_sq = 1;
};

struct GramSchmidtData {
    // mu[i][j] for j < i; b_star_norms_sq[i] = |b*_i|^2, all exact.
    std::vector<std::vector<Rat>> mu;
    std::vector<Rat> b_star_norms_sq;
};

struct LllResult {
    IntBasis reduced;
    IntBasis transform;  // reduced = transform * input, unimodular
};

struct ShortestVec {
    std::vector<Int> coords;  // w.r.t. the input basis
    Rat norm_sq;              // includes the scale
};

struct ClosestVec {
    std::vector<Int> coords;
    double dist_sq;
};

// Standard symplectic form J = [[0, I], [-I, 0]] of size 2*half_dim.
IntBasis symplectic_j(int half_dim);

// M J M^T == q J, decided exactly. Odd dimension is a dimension error.
bool is_q_symplectic(const IntBasis& m, const Int& q);

// Exact Gram-Schmidt of the rows; throws on rank deficiency.
GramSchmidtData gram_schmidt(const IntBasis& b);

// Textbook LLL with exact rational arithmetic, delta in (1/4, 1].
LllResult lll_reduce_with_transform(const IntBasis& b, const Rat& delta = Rat(3, 4));
ScaledLattice lll_reduce(const ScaledLattice& l, const Rat& delta = Rat(3, 4));

// Exact SVP: LLL preprocessing + Fincke-Pohst enumeration with rational interval
// tests. Among minimal vectors returns the one whose coordinate vector (sign-
// normalized so its first nonzero entry is positive) is lexicographically least.
ShortestVec shortest_vector(const ScaledLattice& l);

// CVP by Schnorr-Euchner enumeration in double precision over the LLL-reduced
// basis; ties within 1e-9 relative distance break lexicographically.
ClosestVec closest_vector(const ScaledLattice& l, std::span<const double> target);

// Babai nearest-plane on the basis as given (no internal reduction); the output
// v satisfies |target - v|^2 <= (1/4) * sum_i |b*_i|^2 for this basis's GSO.
std::vector<Int> babai_nearest_plane(const ScaledLattice& l, std::span<const double> target);

// Symplectic dual (alpha L(B))^x = (1/alpha) L(B^-T J^T), returned with cleared
// denominators. Requires B square invertible of even dimension.
ScaledLattice symplectic_dual_basis(const ScaledLattice& l);

// Does sub contain the vector whose coordinates w.r.t. super's basis are given?
// Scales must be commensurate (their ratio a rational square).
bool lattice_contains(const ScaledLattice& sub, std::span<const Int> coords_in_super,
                      const ScaledLattice& super);

}  // namespace gkpsis::exactlat
