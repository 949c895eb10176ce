#include "normalize.hpp"

namespace relpres {

namespace {

bool cancels(const Letter& a, const Letter& b) {
  if (a.kind == LetterKind::XGen && b.kind == LetterKind::XGen)
    return a.name == b.name && a.sign == -b.sign;
  if (a.kind == LetterKind::Stable && b.kind == LetterKind::Stable) return a.sign == -b.sign;
  return false;
}

}  // namespace

NormalizeResult normalize_traced(const Word& w, const RelativePresentation& p) {
  NormalizeResult res;
  Word& stack = res.word;
  for (const Letter& next : w) {
    if (next.kind == LetterKind::Subgroup) {
      auto o = p.oracle(next.lambda);
      if (o->is_identity(next.element) == TriState::True) {
        res.trace.push_back({TraceEvent::Drop, stack.size(), next, {}, {}});
        continue;
      }
    }
    stack.push_back(next);
    while (stack.size() >= 2) {
      Letter& a = stack[stack.size() - 2];
      Letter& b = stack[stack.size() - 1];
      if (cancels(a, b)) {
        res.trace.push_back({TraceEvent::Cancel, stack.size() - 2, a, b, {}});
        stack.pop_back();
        stack.pop_back();
        continue;
      }
      if (a.kind == LetterKind::Subgroup && b.kind == LetterKind::Subgroup &&
          a.lambda == b.lambda) {
        auto o = p.oracle(a.lambda);
        auto prod = o->multiply(a.element, b.element);
        if (!prod)
          throw BudgetError("normalize: oracle " + a.lambda +
                            " cannot canonicalize a product (outside its ball)");
        if (prod->empty()) {
          res.trace.push_back({TraceEvent::MergeKill, stack.size() - 2, a, b, {}});
          stack.pop_back();
          stack.pop_back();
        } else {
          Letter m = Letter::sub(a.lambda, std::move(*prod));
          res.trace.push_back({TraceEvent::Merge, stack.size() - 2, a, b, m});
          stack.pop_back();
          stack.back() = std::move(m);
        }
        continue;
      }
      break;
    }
  }
  return res;
}

Word normalize(const Word& w, const RelativePresentation& p) {
  return normalize_traced(w, p).word;
}

Word replay_trace(const Word& w, const std::vector<TraceEvent>& trace) {
  Word cur = w;
  for (const auto& ev : trace) {
    if (ev.pos >= cur.size()) throw InvariantError("trace replay: position out of range");
    switch (ev.kind) {
      case TraceEvent::Drop:
        if (!(cur[ev.pos] == ev.a)) throw InvariantError("trace replay: letter mismatch (drop)");
        cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(ev.pos));
        break;
      case TraceEvent::Cancel:
      case TraceEvent::MergeKill:
        if (ev.pos + 1 >= cur.size() || !(cur[ev.pos] == ev.a) || !(cur[ev.pos + 1] == ev.b))
          throw InvariantError("trace replay: letter mismatch (pair)");
        cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(ev.pos),
                  cur.begin() + static_cast<std::ptrdiff_t>(ev.pos) + 2);
        break;
      case TraceEvent::Merge:
        if (ev.pos + 1 >= cur.size() || !(cur[ev.pos] == ev.a) || !(cur[ev.pos + 1] == ev.b))
          throw InvariantError("trace replay: letter mismatch (merge)");
        cur[ev.pos] = ev.m;
        cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(ev.pos) + 1);
        break;
    }
  }
  return cur;
}

}  // namespace relpres
