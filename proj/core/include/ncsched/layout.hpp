#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ncsched/gf.hpp"

namespace ncsched {

enum class StorageFormat { Uncoded, Coded };

enum class CodeGenerator {
    Vandermonde,  // k_r = (x_r^0 .. x_r^(T-1)), distinct points => MDS
    Random,       // i.i.d. uniform coefficients
    PerDrive,     // each drive's coded chunks combine only that drive's
                  // uncoded stripe (coupled coded/uncoded comparisons)
};

struct LayoutParams {
    std::size_t chunks = 1;       // T, file chunks
    std::size_t replication = 1;  // W, copies of each stripe set
    std::size_t stripe_sets = 1;  // s, must divide T
    StorageFormat format = StorageFormat::Uncoded;
    unsigned field_order = 256;
    CodeGenerator generator = CodeGenerator::Vandermonde;
    std::size_t coded_chunks = 0;  // H; 0 means replication * chunks
    std::uint64_t seed = 0;        // Random generator draws

    std::size_t drives() const { return replication * stripe_sets; }
    std::size_t total_coded() const {
        return coded_chunks == 0 ? replication * chunks : coded_chunks;
    }
    void validate() const;  // throws std::invalid_argument
};

/// Immutable mapping of chunks onto drives.  Uncoded layouts place whole
/// stripe sets (T/s consecutive file chunks) on W drives each; coded
/// layouts place H/R consecutively numbered coded chunks per drive.
struct DriveLayout {
    LayoutParams params;
    std::vector<std::vector<std::uint32_t>> drive_chunks;  // per drive
    std::vector<std::vector<std::uint32_t>> chunk_drives;  // inverse index
    std::vector<std::uint32_t> chunk_stripe;               // uncoded only
    std::vector<EncodingVector> vectors;                   // coded only
    bool mds = false;  // true when the MDS property holds by construction

    std::size_t drive_count() const { return drive_chunks.size(); }
    std::size_t chunk_count() const { return chunk_drives.size(); }
};

DriveLayout build_uncoded(const LayoutParams& params);
DriveLayout build_coded(const LayoutParams& params);

/// Checks that every T-subset of encoding vectors has rank T, enumerating
/// exhaustively when C(H,T) <= max_subsets and sampling that many random
/// subsets otherwise.  Throws std::logic_error on an uncoded layout.
bool verify_mds(const DriveLayout& layout, std::size_t max_subsets = 1000000,
                std::uint64_t sample_seed = 1);

/// Drives storing the given chunk id (W drives uncoded, one drive coded).
/// Throws std::out_of_range for an unknown id.
const std::vector<std::uint32_t>& drives_holding(const DriveLayout& layout,
                                                 std::uint32_t chunk);

/// JSON document listing per-drive chunk ids and, for coded layouts, the
/// coefficient arrays.
std::string dump_json(const DriveLayout& layout);

}  // namespace ncsched
