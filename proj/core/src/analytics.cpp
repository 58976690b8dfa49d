#include "ncsched/analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace ncsched {

double erlang_blocking(double lambda, double service_slots, unsigned buffer) {
    if (lambda < 0) throw std::invalid_argument("arrival rate must be >= 0");
    if (buffer == 0) throw std::invalid_argument("buffer must hold at least one user");
    const long double rho = (long double)lambda * service_slots;
    long double b = 1.0L;
    for (unsigned k = 1; k <= buffer; ++k) b = rho * b / (k + rho * b);
    return double(b);
}

namespace {

double pbd_power(double pbd, long exponent) {
    if (pbd < 0 || pbd > 1)
        throw std::invalid_argument("drive blocking probability must be in [0,1]");
    if (exponent <= 0) return 1.0;
    return double(std::pow((long double)pbd, (long double)exponent));
}

}  // namespace

double leader_block_single(double pbd, unsigned replication, unsigned chunks,
                           unsigned rank, StorageFormat format) {
    if (rank >= chunks) throw std::invalid_argument("leader rank must be < T");
    long wt = long(replication) * chunks;
    long exponent = format == StorageFormat::Coded
                        ? wt - long(rank)
                        : wt - long(replication) * rank;
    return pbd_power(pbd, exponent);
}

double leader_block_striped_uncoded(double pbd, unsigned replication,
                                    unsigned stripe_sets, unsigned r_sets) {
    if (r_sets >= stripe_sets)
        throw std::invalid_argument("completed stripe sets must be < s");
    long exponent = long(replication) * (long(stripe_sets) - r_sets);
    return pbd_power(pbd, exponent);
}

BlockBounds leader_block_striped_coded_bounds(double pbd, unsigned replication,
                                              unsigned stripe_sets,
                                              unsigned chunks, unsigned rank) {
    if (stripe_sets == 0 || chunks % stripe_sets != 0)
        throw std::invalid_argument("stripe set count must divide T");
    if (rank >= chunks) throw std::invalid_argument("leader rank must be < T");
    const long ws = long(replication) * stripe_sets;
    const long per_stripe = long(chunks) / stripe_sets;
    const long wt = long(replication) * chunks;

    // Worst case: every previous read concentrated, so floor(r/(T/s))
    // drives are fully read off.  Best case: reads spread evenly, no
    // drive is exhausted before rank W*T - W*s + 1.
    long upper_exp = ws - long(rank) / per_stripe;
    long lower_exp = ws - std::max(0L, long(rank) - (wt - ws));
    return {pbd_power(pbd, lower_exp), pbd_power(pbd, upper_exp)};
}

}  // namespace ncsched
