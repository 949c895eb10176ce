#pragma once

#include <vector>

#include "presentation.hpp"
#include "word.hpp"

namespace relpres {

// One reduction event of the free-product normal form, recorded at the
// position it fired (index of the left consumed letter in the word as it
// stood at that moment). The trace is what lets a diagram builder replay
// a normalization as cell attachments, or undo it.
struct TraceEvent {
  enum Kind : uint8_t {
    Cancel,     // x · x^{-1} (XGen or stable letters)
    Merge,      // same-subgroup letters a · b -> m, m != 1
    MergeKill,  // same-subgroup letters a · b -> identity, both deleted
    Drop        // a single identity subgroup letter deleted
  };
  Kind kind;
  std::size_t pos;
  Letter a;
  Letter b;  // unused for Drop
  Letter m;  // Merge only
};

struct NormalizeResult {
  Word word;
  std::vector<TraceEvent> trace;
};

// Free-product normal form: stack reduction to a fixed point. Throws
// BudgetError when a subgroup oracle cannot canonicalize a product.
NormalizeResult normalize_traced(const Word& w, const RelativePresentation& p);
Word normalize(const Word& w, const RelativePresentation& p);

// Applies the trace to `w` again (sanity replay): returns the normalized
// word, asserting every event matches. Used by tests and the diagram
// builder to keep word and boundary in lockstep.
Word replay_trace(const Word& w, const std::vector<TraceEvent>& trace);

}  // namespace relpres
