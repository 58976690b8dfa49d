#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ncsched {

using FieldElem = std::uint16_t;

/// Arithmetic over GF(q).  q = 256 uses log/antilog tables over the byte
/// field with modulus x^8+x^4+x^3+x+1 and generator 0x03; any prime q up
/// to 65521 uses modular arithmetic.
class GaloisField {
public:
    explicit GaloisField(unsigned order);

    unsigned order() const { return q_; }
    bool is_binary() const { return binary_; }

    FieldElem add(FieldElem a, FieldElem b) const {
        return binary_ ? FieldElem(a ^ b) : FieldElem((a + b) % q_);
    }
    FieldElem sub(FieldElem a, FieldElem b) const {
        return binary_ ? FieldElem(a ^ b) : FieldElem((a + q_ - b) % q_);
    }
    FieldElem neg(FieldElem a) const {
        return binary_ ? a : FieldElem(a == 0 ? 0 : q_ - a);
    }
    FieldElem mul(FieldElem a, FieldElem b) const {
        if (binary_) {
            if (a == 0 || b == 0) return 0;
            return exp_[std::size_t(log_[a]) + log_[b]];
        }
        return FieldElem((std::uint32_t(a) * b) % q_);
    }
    /// Multiplicative inverse; throws std::domain_error on zero input.
    FieldElem inv(FieldElem a) const;
    FieldElem div(FieldElem a, FieldElem b) const { return mul(a, inv(b)); }

    /// a^e via square-and-multiply (e >= 0).
    FieldElem pow(FieldElem a, std::uint64_t e) const;

private:
    unsigned q_ = 0;
    bool binary_ = false;
    std::vector<FieldElem> exp_;  // g^i, i in [0, 510), for table lookups
    std::vector<FieldElem> log_;  // discrete log base g, log_[0] unused
};

using EncodingVector = std::vector<FieldElem>;

/// Unit row vector e_index of the given length.
EncodingVector unit_vector(std::size_t length, std::size_t index);

/// Row space of the encoding vectors one user has collected.  The basis
/// is kept in reduced row-echelon form, so appending a row costs
/// O(width * rank) and rank queries are free.
class KnowledgeMatrix {
public:
    KnowledgeMatrix(const GaloisField& field, std::size_t width);

    std::size_t width() const { return width_; }
    std::size_t rank() const { return basis_.size(); }

    /// Adds a row to the span.  Returns true iff the rank increased.
    /// Throws std::invalid_argument when the row width does not match.
    bool append(const EncodingVector& row);

    /// True iff appending the row would increase the rank.
    bool is_innovative(const EncodingVector& row) const;

    /// Chunk indices whose unit vectors lie in the span.  With rank equal
    /// to the width this is every index.
    std::vector<std::size_t> decoded_chunks() const;

    const std::vector<EncodingVector>& basis() const { return basis_; }

private:
    // Reduces row in place against the basis; returns the column of the
    // first surviving nonzero entry, or width_ when fully reduced.
    std::size_t reduce(EncodingVector& row) const;

    const GaloisField* field_;
    std::size_t width_;
    std::vector<EncodingVector> basis_;  // rows sorted by pivot column
    std::vector<std::size_t> pivots_;
};

/// Rank of an arbitrary set of rows over the field.
std::size_t rank_of(const GaloisField& field, std::size_t width,
                    const std::vector<EncodingVector>& rows);

}  // namespace ncsched
