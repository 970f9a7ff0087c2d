#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "haarfree/matrix_types.hpp"
#include "haarfree/polyalg/polynomial.hpp"

namespace haarfree::freelim {

enum class UnitaryRole { FreeHaar, FreeBrownian };

struct UnitarySymbol {
    UnitaryRole role = UnitaryRole::FreeHaar;
    double t = 0;  // FreeBrownian only
};

// Binds unitary symbols to free roles and deterministic symbols to concrete matrices of
// size N*M. With M > 1 the unitaries act as u (x) I_M and the matrices live in M_N (x) M_M.
struct AlphabetAssignment {
    std::vector<UnitarySymbol> unitaries;
    std::vector<ComplexMatrix> matrices;
    Eigen::Index inner = 1;  // N
    Eigen::Index outer = 1;  // M

    static AlphabetAssignment haar(std::size_t p);
    AlphabetAssignment& with_matrices(std::vector<ComplexMatrix> Z, Eigen::Index M = 1);

    std::size_t p() const { return unitaries.size(); }
    std::size_t q() const { return matrices.size(); }
    poly::Alphabet alphabet() const {
        return {static_cast<int>(p() + q()), static_cast<int>(p())};
    }
    void validate() const;
};

struct Block {
    enum class Kind : std::uint8_t { Unitary, Matrix };
    Kind kind = Kind::Unitary;
    int symbol = 0;      // unitary symbol, 0-based
    long exponent = 0;   // unitary exponent, nonzero after canonicalization
    int matrix = -1;     // interned matrix handle
    bool centered = false;

    static Block unitary(int symbol, long exponent) { return {Kind::Unitary, symbol, exponent, -1, false}; }
    static Block of_matrix(int handle, bool centered = false) { return {Kind::Matrix, 0, 0, handle, centered}; }
    bool is_unitary() const { return kind == Kind::Unitary; }

    friend bool operator==(const Block&, const Block&) = default;
};

// Trace word: a cyclic sequence of unitary powers and matrix blocks.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<Block> blocks) : blocks_(std::move(blocks)) {}

    const std::vector<Block>& blocks() const { return blocks_; }
    std::vector<Block>& blocks() { return blocks_; }
    std::size_t size() const { return blocks_.size(); }
    bool empty() const { return blocks_.empty(); }

    Word rotate(std::size_t k) const;
    Word& append(const Block& b) {
        blocks_.push_back(b);
        return *this;
    }

    friend bool operator==(const Word&, const Word&) = default;

private:
    std::vector<Block> blocks_;
};

// Trace in the free product of the deterministic matrix algebra with free unitaries,
// by the centering recursion: each matrix block B is split as B = B° + E(B) where
// E(B) = I_N (x) b is its expectation onto 1 (x) M_M. Words whose matrix blocks are all
// centered and which alternate between free algebras have zero trace.
//
// Not thread safe: use one engine per worker.
class MomentEngine {
public:
    explicit MomentEngine(AlphabetAssignment a);

    const AlphabetAssignment& assignment() const { return a_; }

    // Handles for the assigned matrices Z_k (0-based) and their adjoints.
    int matrix_handle(std::size_t k, bool adjoint = false) const;
    int intern(ComplexMatrix m);
    const ComplexMatrix& matrix(int handle) const { return store_[static_cast<std::size_t>(handle)]; }

    Word word_from_monomial(const poly::Monomial& m);

    cplx tau_word(const Word& w);
    cplx tau_poly(const poly::Polynomial& P);

    std::size_t cache_size() const { return cache_.size(); }
    std::size_t cache_hits() const { return hits_; }
    void clear_cache();

    // Canonical form: cyclically merged, exponent-zero blocks dropped, adjacent matrices
    // multiplied, rotated to the least rotation. Returns false if a zero matrix block appears.
    bool canonicalize(Word& w);

private:
    cplx recurse(Word w);
    cplx trace_matrix(int handle) const;
    cplx tau_unitary_only(const Word& w) const;
    int product(int a, int b);
    int centered(int a);
    int expectation(int a);  // handle of I_N (x) b, or -1 if zero
    bool is_zero_matrix(int a) const;
    static std::string key_of(const Word& w);

    AlphabetAssignment a_;
    Eigen::Index dim_;
    std::vector<ComplexMatrix> store_;
    std::vector<double> norms_;
    std::vector<int> base_handles_;
    std::map<std::pair<int, int>, int> product_cache_;
    std::unordered_map<int, int> centered_cache_;
    std::unordered_map<int, int> expectation_cache_;
    std::unordered_map<std::string, cplx> cache_;
    std::size_t hits_ = 0;
};

cplx tau_word(const Word& w, const AlphabetAssignment& a);
cplx tau_poly(const poly::Polynomial& P, const AlphabetAssignment& a);

}  // namespace haarfree::freelim
