#pragma once

#include "sbn/network.hpp"
#include "sbn/predicates.hpp"
#include "sbn/rng.hpp"

namespace sbn {

/* Network shape for class-constrained sampling. Layer 1 is the input rail,
   layer `depth` the readout rail; the remaining gate budget spreads evenly
   over layers 2..depth-1. horizon = 0 means "one step per layer" (T = depth). */
struct GenParams {
  int n_in = 8;
  int n_out = 8;
  int internal_gates = 16; // gate-bearing nodes including the readout layer
  int depth = 4;
  int blocks = 2;
  int delta0 = 2;
  int horizon = 0;
  int max_fanin = kMaxFanin;
  int retry_budget = 64;
};

/* Samples a network whose six predicate bits equal `target` exactly. Positive
   bits are built in by construction (layered typing, forward wiring, balanced
   delays, split blocks, replicated rules, zero positions); each zero bit gets
   a targeted structural violation. The result is re-verified; a failed draw is
   resampled up to retry_budget times before a generation error carrying the
   target escapes. */
SbnNetwork generate(const ConstraintVector& target, const GenParams& params, Rng& rng);

struct MutParams {
  double lambda = 3.0;     // Poisson parameter for the chain length, floor 1
  double per_gate = 0.15;  // independent firing rate of each mutation channel
  int retry_budget = 20;
};

/* Chain length draw: max(1, Poisson(lambda)). Exposed for distribution tests. */
int mutation_chain_length(const MutParams& params, Rng& rng);

/* Applies a chain of elementary mutations. Each elementary mutation visits
   every gate-bearing node and fires two independent channels at `per_gate`:
   an operation channel replacing the gate table from the class-admissible
   catalog (layer-wide under homogeneity so the rule stays replicated), and a
   wiring channel rewiring one operand to a class-admissible source. The whole
   chain is discarded and redrawn unless the mutant still evaluates to
   `target`; after retry_budget failures the parent is returned unchanged and
   *exhausted (when given) is set. */
SbnNetwork mutate(const SbnNetwork& net, const ConstraintVector& target, const MutParams& params,
                  Rng& rng, bool* exhausted = nullptr);

} // namespace sbn
