#include <doctest.h>
#include <stdexcept>

#include <algorithm>
#include <set>
#include <tuple>

#include "ncsched/layout.hpp"

using namespace ncsched;

namespace {

LayoutParams uncoded_params(std::size_t t, std::size_t w, std::size_t s) {
    LayoutParams p;
    p.chunks = t;
    p.replication = w;
    p.stripe_sets = s;
    p.format = StorageFormat::Uncoded;
    return p;
}

LayoutParams coded_params(std::size_t t, std::size_t w, std::size_t s,
                          unsigned q = 257,
                          CodeGenerator gen = CodeGenerator::Vandermonde) {
    LayoutParams p;
    p.chunks = t;
    p.replication = w;
    p.stripe_sets = s;
    p.format = StorageFormat::Coded;
    p.field_order = q;
    p.generator = gen;
    return p;
}

}  // namespace

TEST_CASE("uncoded striping follows the stripe/copy rule") {
    SUBCASE("degenerate single-chunk striping") {
        auto layout = build_uncoded(uncoded_params(4, 1, 4));
        REQUIRE(layout.drive_count() == 4);
        for (std::uint32_t d = 0; d < 4; ++d)
            CHECK(layout.drive_chunks[d] == std::vector<std::uint32_t>{d});
    }
    SUBCASE("two stripes, two copies") {
        auto layout = build_uncoded(uncoded_params(4, 2, 2));
        REQUIRE(layout.drive_count() == 4);
        CHECK(layout.drive_chunks[0] == std::vector<std::uint32_t>{0, 1});
        CHECK(layout.drive_chunks[1] == std::vector<std::uint32_t>{2, 3});
        CHECK(layout.drive_chunks[2] == std::vector<std::uint32_t>{0, 1});
        CHECK(layout.drive_chunks[3] == std::vector<std::uint32_t>{2, 3});
    }
    SUBCASE("T=100 W=2 s=4") {
        auto layout = build_uncoded(uncoded_params(100, 2, 4));
        REQUIRE(layout.drive_count() == 8);
        for (const auto& chunks : layout.drive_chunks) CHECK(chunks.size() == 25);
        for (std::uint32_t j = 0; j < 100; ++j)
            CHECK(layout.chunk_drives[j].size() == 2);
    }
}

TEST_CASE("uncoded layout invariants") {
    using Shape = std::tuple<std::size_t, std::size_t, std::size_t>;
    for (auto [t, w, s] :
         {Shape{6, 1, 3}, Shape{6, 2, 2}, Shape{12, 3, 4}, Shape{8, 2, 8}}) {
        auto layout = build_uncoded(uncoded_params(t, w, s));
        std::set<std::uint32_t> all;
        for (const auto& chunks : layout.drive_chunks)
            all.insert(chunks.begin(), chunks.end());
        CHECK(all.size() == t);  // drives collectively hold the whole file
        for (std::uint32_t j = 0; j < t; ++j) {
            CHECK(layout.chunk_drives[j].size() == w);
            for (auto d : layout.chunk_drives[j]) {
                const auto& dc = layout.drive_chunks[d];
                CHECK(std::find(dc.begin(), dc.end(), j) != dc.end());
            }
        }
    }
}

TEST_CASE("uncoded parameter validation") {
    CHECK_THROWS_AS(build_uncoded(uncoded_params(4, 1, 3)), std::invalid_argument);
    CHECK_THROWS_AS(build_uncoded(uncoded_params(4, 1, 5)), std::invalid_argument);
    CHECK_THROWS_AS(build_uncoded(uncoded_params(0, 1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(build_coded(uncoded_params(4, 1, 4)), std::invalid_argument);
}

TEST_CASE("Vandermonde coded layout") {
    SUBCASE("T=1 vectors are nonzero scalars") {
        auto layout = build_coded(coded_params(1, 3, 1));
        for (const auto& v : layout.vectors) {
            REQUIRE(v.size() == 1);
            CHECK(v[0] != 0);
        }
        CHECK(verify_mds(layout));
    }
    SUBCASE("T=4 H=8 is MDS over GF(257) and GF(256)") {
        CHECK(verify_mds(build_coded(coded_params(4, 2, 4, 257))));
        CHECK(verify_mds(build_coded(coded_params(4, 2, 4, 256))));
    }
    SUBCASE("T=8 W=2 s=4 places H/R consecutive chunks per drive") {
        auto layout = build_coded(coded_params(8, 2, 4));
        CHECK(layout.vectors.size() == 16);
        REQUIRE(layout.drive_count() == 8);
        for (std::uint32_t d = 0; d < 8; ++d)
            CHECK(layout.drive_chunks[d] ==
                  std::vector<std::uint32_t>{2 * d, 2 * d + 1});
    }
    SUBCASE("field must exceed H") {
        CHECK_THROWS_AS(build_coded(coded_params(4, 2, 4, 7)), std::invalid_argument);
    }
}

TEST_CASE("verify_mds catches injected duplicates") {
    auto layout = build_coded(coded_params(4, 2, 4));
    layout.vectors[5] = layout.vectors[2];
    CHECK_FALSE(verify_mds(layout));
}

TEST_CASE("verify_mds rejects uncoded layouts") {
    auto layout = build_uncoded(uncoded_params(4, 1, 4));
    CHECK_THROWS_AS(verify_mds(layout), std::logic_error);
}

TEST_CASE("Vandermonde is exhaustively MDS for small shapes") {
    for (std::size_t t = 1; t <= 6; ++t) {
        for (std::size_t h = t; h <= 12; ++h) {
            LayoutParams p = coded_params(t, 1, 1, 257);
            p.coded_chunks = h;
            auto layout = build_coded(p);
            CHECK(verify_mds(layout));
        }
    }
}

TEST_CASE("random generation over GF(2) usually breaks MDS") {
    int failures = 0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) {
        LayoutParams p = coded_params(4, 2, 4, 2, CodeGenerator::Random);
        p.seed = std::uint64_t(i);
        if (!verify_mds(build_coded(p))) ++failures;
    }
    INFO("GF(2) random failure rate: ", double(failures) / trials);
    CHECK(failures > trials / 2);
}

TEST_CASE("random generation is reproducible from the seed") {
    LayoutParams p = coded_params(4, 2, 4, 257, CodeGenerator::Random);
    p.seed = 42;
    auto a = build_coded(p);
    auto b = build_coded(p);
    CHECK(a.vectors == b.vectors);
    p.seed = 43;
    CHECK(build_coded(p).vectors != a.vectors);
}

TEST_CASE("drives_holding") {
    SUBCASE("uncoded") {
        auto single = build_uncoded(uncoded_params(4, 1, 4));
        CHECK(drives_holding(single, 2).size() == 1);

        auto striped = build_uncoded(uncoded_params(4, 2, 2));
        CHECK(drives_holding(striped, 2) == std::vector<std::uint32_t>{1, 3});
        CHECK_THROWS_AS(drives_holding(striped, 4), std::out_of_range);
    }
    SUBCASE("coded chunks live on exactly one drive") {
        auto layout = build_coded(coded_params(4, 2, 4));
        for (std::uint32_t c = 0; c < 8; ++c)
            CHECK(drives_holding(layout, c).size() == 1);
        CHECK_THROWS_AS(drives_holding(layout, 8), std::out_of_range);
    }
}

TEST_CASE("per-drive generator spans only the drive's stripe") {
    auto layout = build_coded(coded_params(8, 2, 4, 257, CodeGenerator::PerDrive));
    REQUIRE(layout.vectors.size() == 16);
    CHECK_FALSE(layout.mds);
    const std::size_t per_stripe = 2;
    for (std::uint32_t c = 0; c < 16; ++c) {
        std::uint32_t drive = drives_holding(layout, c)[0];
        std::uint32_t stripe = drive % 4;
        for (std::size_t j = 0; j < 8; ++j) {
            bool in_stripe = j >= stripe * per_stripe && j < (stripe + 1) * per_stripe;
            if (!in_stripe) CHECK(layout.vectors[c][j] == 0);
        }
        // Leading stripe coefficient is x^0 = 1.
        CHECK(layout.vectors[c][stripe * per_stripe] == 1);
    }

    SUBCASE("degenerates to scaled unit vectors when s = T") {
        auto scalar = build_coded(coded_params(4, 1, 4, 257, CodeGenerator::PerDrive));
        for (std::uint32_t c = 0; c < 4; ++c) {
            int nonzero = 0;
            for (std::size_t j = 0; j < 4; ++j)
                if (scalar.vectors[c][j] != 0) ++nonzero;
            CHECK(nonzero == 1);
            CHECK(scalar.vectors[c][c] != 0);
        }
    }
}

TEST_CASE("layout json dump") {
    auto layout = build_coded(coded_params(4, 2, 4));
    auto text = dump_json(layout);
    CHECK(text.find("\"format\": \"coded\"") != std::string::npos);
    CHECK(text.find("\"vectors\"") != std::string::npos);
    auto plain = dump_json(build_uncoded(uncoded_params(4, 2, 2)));
    CHECK(plain.find("\"format\": \"uncoded\"") != std::string::npos);
    CHECK(plain.find("\"vectors\"") == std::string::npos);
}
