#include "ncsched/layout.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace ncsched {

void LayoutParams::validate() const {
    if (chunks == 0) throw std::invalid_argument("chunk count must be positive");
    if (replication == 0) throw std::invalid_argument("replication must be positive");
    if (stripe_sets == 0 || stripe_sets > chunks)
        throw std::invalid_argument("stripe set count must be in [1, T]");
    if (chunks % stripe_sets != 0)
        throw std::invalid_argument("stripe set count must divide the chunk count");
    if (format == StorageFormat::Coded) {
        std::size_t h = total_coded();
        if (h % drives() != 0)
            throw std::invalid_argument("drive count must divide the coded chunk count");
        if (generator == CodeGenerator::Vandermonde && field_order <= h)
            throw std::invalid_argument("Vandermonde generation needs field order > H");
    }
}

DriveLayout build_uncoded(const LayoutParams& params) {
    if (params.format != StorageFormat::Uncoded)
        throw std::invalid_argument("build_uncoded called with coded params");
    params.validate();

    const std::size_t t = params.chunks;
    const std::size_t s = params.stripe_sets;
    const std::size_t w = params.replication;
    const std::size_t per_stripe = t / s;

    DriveLayout layout;
    layout.params = params;
    layout.drive_chunks.resize(w * s);
    layout.chunk_drives.resize(t);
    layout.chunk_stripe.resize(t);

    // Stripe set k holds chunks [k*T/s, (k+1)*T/s); copy w lives on
    // drive w*s + k.
    for (std::size_t j = 0; j < t; ++j) layout.chunk_stripe[j] = std::uint32_t(j / per_stripe);
    for (std::size_t copy = 0; copy < w; ++copy) {
        for (std::size_t k = 0; k < s; ++k) {
            std::size_t drive = copy * s + k;
            for (std::size_t j = k * per_stripe; j < (k + 1) * per_stripe; ++j) {
                layout.drive_chunks[drive].push_back(std::uint32_t(j));
                layout.chunk_drives[j].push_back(std::uint32_t(drive));
            }
        }
    }
    return layout;
}

DriveLayout build_coded(const LayoutParams& params) {
    if (params.format != StorageFormat::Coded)
        throw std::invalid_argument("build_coded called with uncoded params");
    params.validate();

    const std::size_t t = params.chunks;
    const std::size_t r = params.drives();
    const std::size_t h = params.total_coded();
    const std::size_t per_drive = h / r;
    const GaloisField field(params.field_order);

    DriveLayout layout;
    layout.params = params;
    layout.drive_chunks.resize(r);
    layout.chunk_drives.resize(h);
    layout.vectors.resize(h);

    for (std::size_t c = 0; c < h; ++c) {
        std::size_t drive = c / per_drive;
        layout.drive_chunks[drive].push_back(std::uint32_t(c));
        layout.chunk_drives[c].push_back(std::uint32_t(drive));
    }

    switch (params.generator) {
        case CodeGenerator::Vandermonde: {
            // Points 1..H are distinct, so every TxT submatrix is a
            // Vandermonde matrix with nonzero determinant.
            for (std::size_t c = 0; c < h; ++c) {
                auto x = FieldElem((c + 1) % params.field_order);
                EncodingVector v(t);
                FieldElem p = 1;
                for (std::size_t j = 0; j < t; ++j) {
                    v[j] = p;
                    p = field.mul(p, x);
                }
                layout.vectors[c] = std::move(v);
            }
            layout.mds = true;
            break;
        }
        case CodeGenerator::Random: {
            std::mt19937_64 rng(params.seed);
            std::uniform_int_distribution<unsigned> coeff(0, params.field_order - 1);
            for (std::size_t c = 0; c < h; ++c) {
                EncodingVector v(t);
                for (auto& e : v) e = FieldElem(coeff(rng));
                layout.vectors[c] = std::move(v);
            }
            layout.mds = false;  // only verify_mds can establish it
            break;
        }
        case CodeGenerator::PerDrive: {
            // Drive d mirrors the uncoded stripe layout: its coded chunks
            // combine only the T/s file chunks of stripe d mod s, using
            // globally distinct evaluation points within the stripe span.
            if (params.field_order <= h)
                throw std::invalid_argument("per-drive generation needs field order > H");
            const std::size_t s = params.stripe_sets;
            const std::size_t per_stripe = t / s;
            for (std::size_t c = 0; c < h; ++c) {
                std::size_t drive = c / per_drive;
                std::size_t stripe = drive % s;
                auto x = FieldElem((c + 1) % params.field_order);
                EncodingVector v(t, 0);
                FieldElem p = 1;
                for (std::size_t m = 0; m < per_stripe; ++m) {
                    v[stripe * per_stripe + m] = p;
                    p = field.mul(p, x);
                }
                layout.vectors[c] = std::move(v);
            }
            // The global MDS property needs full-support vectors; a
            // per-drive code only spans each stripe subspace.
            layout.mds = (s == 1);
            break;
        }
    }
    return layout;
}

namespace {

double subset_count(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    double c = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        c *= double(n - i) / double(i + 1);
        if (c > 1e18) return 1e18;
    }
    return c;
}

bool subset_full_rank(const DriveLayout& layout, const GaloisField& field,
                      const std::vector<std::size_t>& pick) {
    KnowledgeMatrix m(field, layout.params.chunks);
    for (std::size_t idx : pick)
        m.append(layout.vectors[idx]);
    return m.rank() == layout.params.chunks;
}

}  // namespace

bool verify_mds(const DriveLayout& layout, std::size_t max_subsets,
                std::uint64_t sample_seed) {
    if (layout.params.format != StorageFormat::Coded)
        throw std::logic_error("verify_mds requires a coded layout");

    const std::size_t h = layout.vectors.size();
    const std::size_t t = layout.params.chunks;
    const GaloisField field(layout.params.field_order);
    if (h < t) return false;

    if (subset_count(h, t) <= double(max_subsets)) {
        // Lexicographic enumeration of all T-subsets.
        std::vector<std::size_t> pick(t);
        for (std::size_t i = 0; i < t; ++i) pick[i] = i;
        while (true) {
            if (!subset_full_rank(layout, field, pick)) return false;
            std::size_t i = t;
            while (i > 0 && pick[i - 1] == h - t + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < t; ++j) pick[j] = pick[j - 1] + 1;
        }
        return true;
    }

    std::mt19937_64 rng(sample_seed);
    std::vector<std::size_t> indices(h);
    for (std::size_t i = 0; i < h; ++i) indices[i] = i;
    for (std::size_t trial = 0; trial < max_subsets; ++trial) {
        for (std::size_t i = 0; i < t; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, h - 1);
            std::swap(indices[i], indices[pick(rng)]);
        }
        std::vector<std::size_t> subset(indices.begin(), indices.begin() + t);
        if (!subset_full_rank(layout, field, subset)) return false;
    }
    return true;
}

const std::vector<std::uint32_t>& drives_holding(const DriveLayout& layout,
                                                 std::uint32_t chunk) {
    if (chunk >= layout.chunk_drives.size())
        throw std::out_of_range("unknown chunk id");
    return layout.chunk_drives[chunk];
}

std::string dump_json(const DriveLayout& layout) {
    nlohmann::ordered_json doc;
    doc["format"] =
        layout.params.format == StorageFormat::Coded ? "coded" : "uncoded";
    doc["T"] = layout.params.chunks;
    doc["W"] = layout.params.replication;
    doc["s"] = layout.params.stripe_sets;
    doc["R"] = layout.drive_count();
    if (layout.params.format == StorageFormat::Coded) {
        doc["q"] = layout.params.field_order;
        doc["H"] = layout.vectors.size();
        doc["mds"] = layout.mds;
    }
    auto drives = nlohmann::ordered_json::array();
    for (std::size_t d = 0; d < layout.drive_chunks.size(); ++d) {
        nlohmann::ordered_json entry;
        entry["drive"] = d;
        entry["chunks"] = layout.drive_chunks[d];
        drives.push_back(std::move(entry));
    }
    doc["drives"] = std::move(drives);
    if (!layout.vectors.empty()) {
        auto vecs = nlohmann::ordered_json::array();
        for (const auto& v : layout.vectors) vecs.push_back(v);
        doc["vectors"] = std::move(vecs);
    }
    return doc.dump(2);
}

}  // namespace ncsched
