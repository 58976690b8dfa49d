#pragma once

#include "ncsched/layout.hpp"

namespace ncsched {

/// Erlang-B blocking for Poisson arrivals at rate lambda into a buffer of
/// N units, each holding a user for exactly T slots (every active user is
/// served at deterministic rate 1/T).  Evaluated with the stable
/// recurrence B(0)=1, B(k) = rho*B(k-1) / (k + rho*B(k-1)), rho = lambda*T.
double erlang_blocking(double lambda, double service_slots, unsigned buffer);

/// True-leader internal blocking for the single-chunk-per-drive layout
/// (R = W*T): coded (pbd)^(W*T - r), uncoded (pbd)^(W*T - W*r).
double leader_block_single(double pbd, unsigned replication, unsigned chunks,
                           unsigned rank, StorageFormat format);

/// Uncoded striped layout (R = W*s), leader with r_sets fully decoded
/// stripe sets: (pbd)^(W*s - W*r_sets).
double leader_block_striped_uncoded(double pbd, unsigned replication,
                                    unsigned stripe_sets, unsigned r_sets);

struct BlockBounds {
    double lower = 0;
    double upper = 0;
};

/// Coded striped layout bounds at leader rank r:
///   upper = (pbd)^(W*s - floor(r / (T/s)))     (reads concentrated)
///   lower = (pbd)^(W*s - max(0, r - (W*T - W*s)))  (reads spread evenly)
/// At s = T both collapse to the single-chunk formula.
BlockBounds leader_block_striped_coded_bounds(double pbd, unsigned replication,
                                              unsigned stripe_sets,
                                              unsigned chunks, unsigned rank);

}  // namespace ncsched
