#include "ncsched/gf.hpp"

#include <stdexcept>

namespace ncsched {

namespace {

bool is_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

GaloisField::GaloisField(unsigned order) : q_(order) {
    if (order == 256) {
        binary_ = true;
        exp_.resize(510);
        log_.resize(256);
        // Generator 0x03, modulus x^8+x^4+x^3+x+1 (0x11B).
        unsigned x = 1;
        for (unsigned i = 0; i < 255; ++i) {
            exp_[i] = FieldElem(x);
            log_[x] = FieldElem(i);
            unsigned next = x ^ (x << 1);  // multiply by 0x03
            if (next & 0x100) next ^= 0x11B;
            x = next & 0xFF;
        }
        for (unsigned i = 255; i < 510; ++i) exp_[i] = exp_[i - 255];
        return;
    }
    if (order < 2 || order > 65521 || !is_prime(order))
        throw std::invalid_argument(
            "field order must be 256 or a prime in [2, 65521]");
}

FieldElem GaloisField::inv(FieldElem a) const {
    if (a == 0) throw std::domain_error("zero has no multiplicative inverse");
    if (binary_) return exp_[255 - log_[a]];
    return pow(a, q_ - 2);  // Fermat: a^(q-2) = a^-1 in a prime field
}

FieldElem GaloisField::pow(FieldElem a, std::uint64_t e) const {
    FieldElem result = 1;
    FieldElem base = a;
    while (e > 0) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

EncodingVector unit_vector(std::size_t length, std::size_t index) {
    EncodingVector v(length, 0);
    v.at(index) = 1;
    return v;
}

KnowledgeMatrix::KnowledgeMatrix(const GaloisField& field, std::size_t width)
    : field_(&field), width_(width) {}

std::size_t KnowledgeMatrix::reduce(EncodingVector& row) const {
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        FieldElem c = row[pivots_[i]];
        if (c == 0) continue;
        const EncodingVector& b = basis_[i];
        for (std::size_t j = 0; j < width_; ++j)
            row[j] = field_->sub(row[j], field_->mul(c, b[j]));
    }
    for (std::size_t j = 0; j < width_; ++j)
        if (row[j] != 0) return j;
    return width_;
}

bool KnowledgeMatrix::append(const EncodingVector& row) {
    if (row.size() != width_)
        throw std::invalid_argument("row width does not match matrix width");
    EncodingVector r = row;
    std::size_t pivot = reduce(r);
    if (pivot == width_) return false;

    // Normalize the pivot to 1 and eliminate its column from the basis,
    // keeping the basis in reduced row-echelon form.
    FieldElem scale = field_->inv(r[pivot]);
    for (std::size_t j = 0; j < width_; ++j) r[j] = field_->mul(r[j], scale);
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        FieldElem c = basis_[i][pivot];
        if (c == 0) continue;
        for (std::size_t j = 0; j < width_; ++j)
            basis_[i][j] = field_->sub(basis_[i][j], field_->mul(c, r[j]));
    }

    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < pivot) ++pos;
    basis_.insert(basis_.begin() + pos, std::move(r));
    pivots_.insert(pivots_.begin() + pos, pivot);
    return true;
}

bool KnowledgeMatrix::is_innovative(const EncodingVector& row) const {
    if (row.size() != width_)
        throw std::invalid_argument("row width does not match matrix width");
    EncodingVector r = row;
    return reduce(r) != width_;
}

std::vector<std::size_t> KnowledgeMatrix::decoded_chunks() const {
    // In reduced row-echelon form a unit vector lies in the span iff the
    // row owning that pivot is the unit vector itself.
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        bool unit = true;
        for (std::size_t j = 0; j < width_; ++j) {
            if (j == pivots_[i]) continue;
            if (basis_[i][j] != 0) {
                unit = false;
                break;
            }
        }
        if (unit) out.push_back(pivots_[i]);
    }
    return out;
}

std::size_t rank_of(const GaloisField& field, std::size_t width,
                    const std::vector<EncodingVector>& rows) {
    KnowledgeMatrix m(field, width);
    for (const auto& r : rows) m.append(r);
    return m.rank();
}

}  // namespace ncsched
