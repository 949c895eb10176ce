#include "oracle.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace relpres {

GenSet GenSet::symmetrized(std::string name, const std::vector<SubWord>& positives) {
  GenSet s;
  s.name = std::move(name);
  s.gens = positives;
  for (const auto& g : positives) s.gens.push_back(subword_inverse(g));
  return s;
}

SubgroupOracle::SubgroupOracle(std::string id, std::vector<std::string> gens)
    : id_(std::move(id)), gens_(std::move(gens)) {
  std::set<std::string> seen;
  for (const auto& g : gens_) {
    if (g.empty() || g == "t") throw SchemaError("oracle " + id_ + ": bad generator name");
    if (!seen.insert(g).second)
      throw SchemaError("oracle " + id_ + ": duplicate generator " + g);
  }
}

int SubgroupOracle::gen_index(const std::string& name) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i] == name) return static_cast<int>(i);
  return -1;
}

TriState SubgroupOracle::is_identity(const SubWord& w) const {
  auto c = canonical(w);
  if (!c) return TriState::Unknown;
  return c->empty() ? TriState::True : TriState::False;
}

TriState SubgroupOracle::equal(const SubWord& a, const SubWord& b) const {
  SubWord prod = a;
  SubWord bi = subword_inverse(b);
  prod.insert(prod.end(), bi.begin(), bi.end());
  return is_identity(prod);
}

std::optional<SubWord> SubgroupOracle::multiply(const SubWord& a, const SubWord& b) const {
  SubWord prod = a;
  prod.insert(prod.end(), b.begin(), b.end());
  return canonical(prod);
}

SubWord SubgroupOracle::free_reduce(const SubWord& w) {
  SubWord out;
  for (const auto& s : w) {
    if (s.exp == 0) continue;
    if (!out.empty() && out.back().gen == s.gen) {
      out.back().exp += s.exp;
      if (out.back().exp == 0) out.pop_back();
    } else {
      out.push_back(s);
    }
  }
  return out;
}

std::string SubgroupOracle::subword_repr(const SubWord& w) {
  std::string r;
  for (const auto& s : w) {
    r += std::to_string(s.gen);
    r += '^';
    r += std::to_string(s.exp);
    r += ';';
  }
  return r;
}

GenSet SubgroupOracle::declared_gen_set() const {
  std::vector<SubWord> pos;
  for (std::size_t i = 0; i < gens_.size(); ++i)
    pos.push_back(SubWord{{static_cast<int>(i), 1}});
  return GenSet::symmetrized("declared", pos);
}

void SubgroupOracle::register_gen_set(const std::string& name,
                                      const std::vector<SubWord>& positives) {
  extra_sets_[name] = GenSet::symmetrized(name, positives);
}

namespace {

struct BallState {
  SubWord elem;
  long long dist;
};

// Breadth-first closure over right multiplication. Returns discovered
// canonical elements in (distance, discovery) order; `closed` reports
// whether the closure exhausted the subgroup strictly inside the radius.
struct BallResult {
  std::vector<BallState> states;
  bool closed = false;
  bool saw_unknown = false;
};

BallResult bfs_ball(const SubgroupOracle& o, const GenSet& gens, long long radius,
                    long long max_states) {
  BallResult res;
  auto id = o.canonical(SubWord{});
  if (!id) {
    res.saw_unknown = true;
    return res;
  }
  std::unordered_set<std::string> seen;
  std::deque<BallState> queue;
  seen.insert(SubgroupOracle::subword_repr(*id));
  queue.push_back({*id, 0});
  res.states.push_back({*id, 0});
  bool frontier_open = false;
  while (!queue.empty()) {
    BallState cur = queue.front();
    queue.pop_front();
    if (cur.dist >= radius) {
      frontier_open = true;
      continue;
    }
    for (const auto& g : gens.gens) {
      auto next = o.multiply(cur.elem, g);
      if (!next) {
        res.saw_unknown = true;
        continue;
      }
      auto key = SubgroupOracle::subword_repr(*next);
      if (seen.count(key)) continue;
      if (static_cast<long long>(seen.size()) >= max_states) {
        res.saw_unknown = true;
        return res;
      }
      seen.insert(key);
      queue.push_back({*next, cur.dist + 1});
      res.states.push_back({*next, cur.dist + 1});
    }
  }
  res.closed = !frontier_open && !res.saw_unknown;
  return res;
}

}  // namespace

std::vector<SubWord> SubgroupOracle::ball(long long radius) const {
  auto res = bfs_ball(*this, declared_gen_set(), radius, 1 << 20);
  std::vector<SubWord> out;
  out.reserve(res.states.size());
  for (auto& s : res.states) out.push_back(std::move(s.elem));
  return out;
}

bool SubgroupOracle::ball_is_whole_group(long long radius) const {
  return bfs_ball(*this, declared_gen_set(), radius, 1 << 20).closed;
}

GeodesicResult SubgroupOracle::geodesic(const SubWord& g, const GeodesicBudget& budget) const {
  return geodesic(g, declared_gen_set(), budget);
}

GeodesicResult SubgroupOracle::geodesic(const SubWord& g, const GenSet& gens,
                                        const GeodesicBudget& budget) const {
  GeodesicResult out;
  auto target = canonical(g);
  if (!target) return out;  // Unknown
  std::string target_key = subword_repr(*target);

  struct Node {
    SubWord elem;
    int parent = -1;
    int via = -1;
    long long dist = 0;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, int> seen;
  auto id = canonical(SubWord{});
  if (!id) return out;
  nodes.push_back({*id, -1, -1, 0});
  seen[subword_repr(*id)] = 0;
  bool saw_unknown = false;
  bool truncated = false;

  // FIFO expansion in generator order yields the shortlex-minimal witness
  // among all geodesics.
  for (std::size_t qi = 0; qi < nodes.size(); ++qi) {
    const Node cur = nodes[qi];
    if (subword_repr(cur.elem) == target_key) {
      out.status = TriState::True;
      out.length = cur.dist;
      std::vector<int> path;
      for (int at = static_cast<int>(qi); nodes[at].parent >= 0; at = nodes[at].parent)
        path.push_back(nodes[at].via);
      std::reverse(path.begin(), path.end());
      out.witness = std::move(path);
      return out;
    }
    if (cur.dist >= budget.max_radius) {
      truncated = true;
      continue;
    }
    for (std::size_t gi = 0; gi < gens.gens.size(); ++gi) {
      auto next = multiply(cur.elem, gens.gens[gi]);
      if (!next) {
        saw_unknown = true;
        continue;
      }
      auto key = subword_repr(*next);
      if (seen.count(key)) continue;
      if (static_cast<long long>(nodes.size()) >= budget.max_states) {
        truncated = true;
        continue;
      }
      seen[key] = static_cast<int>(nodes.size());
      nodes.push_back({std::move(*next), static_cast<int>(qi), static_cast<int>(gi), cur.dist + 1});
    }
  }
  if (!saw_unknown && !truncated) out.status = TriState::False;  // not in the span
  return out;
}

namespace {

// preserve extra generating sets and omega across a rename
void copy_registrations(const SubgroupOracle& from, SubgroupOracle& to) {
  for (const auto& [name, set] : from.extra_gen_sets()) {
    std::vector<SubWord> positives(set.gens.begin(),
                                   set.gens.begin() + static_cast<std::ptrdiff_t>(set.gens.size() / 2));
    to.register_gen_set(name, positives);
  }
  if (from.omega()) to.set_omega(*from.omega());
}

}  // namespace

std::shared_ptr<SubgroupOracle> FreeOracle::clone_with_id(std::string new_id) const {
  auto c = std::make_shared<FreeOracle>(std::move(new_id), gens_);
  copy_registrations(*this, *c);
  return c;
}

std::shared_ptr<SubgroupOracle> FreeAbelianOracle::clone_with_id(std::string new_id) const {
  auto c = std::make_shared<FreeAbelianOracle>(std::move(new_id), gens_);
  copy_registrations(*this, *c);
  return c;
}

std::shared_ptr<SubgroupOracle> FiniteTableOracle::clone_with_id(std::string new_id) const {
  auto c = std::make_shared<FiniteTableOracle>(std::move(new_id), elements_, table_, gens_);
  copy_registrations(*this, *c);
  return c;
}

std::shared_ptr<SubgroupOracle> FpBfsOracle::clone_with_id(std::string new_id) const {
  auto c = std::make_shared<FpBfsOracle>(std::move(new_id), gens_, relators_, radius_);
  copy_registrations(*this, *c);
  return c;
}

std::optional<SubWord> FreeOracle::canonical(const SubWord& w) const {
  for (const auto& s : w)
    if (s.gen < 0 || s.gen >= static_cast<int>(gens_.size()))
      throw SchemaError("oracle " + id_ + ": generator index out of range");
  return free_reduce(w);
}

std::optional<SubWord> FreeAbelianOracle::canonical(const SubWord& w) const {
  std::vector<long long> exps(gens_.size(), 0);
  for (const auto& s : w) {
    if (s.gen < 0 || s.gen >= static_cast<int>(gens_.size()))
      throw SchemaError("oracle " + id_ + ": generator index out of range");
    exps[static_cast<std::size_t>(s.gen)] += s.exp;
  }
  SubWord out;
  for (std::size_t i = 0; i < exps.size(); ++i)
    if (exps[i] != 0) out.push_back({static_cast<int>(i), exps[i]});
  return out;
}

FiniteTableOracle::FiniteTableOracle(std::string id, std::vector<std::string> element_names,
                                     std::vector<std::vector<int>> table,
                                     std::vector<std::string> gen_names)
    : SubgroupOracle(std::move(id), std::move(gen_names)),
      elements_(std::move(element_names)),
      table_(std::move(table)) {
  const int n = static_cast<int>(elements_.size());
  if (n == 0) throw SchemaError("oracle " + id_ + ": empty element list");
  if (static_cast<int>(table_.size()) != n)
    throw SchemaError("oracle " + id_ + ": table row count mismatch");
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n)
      throw SchemaError("oracle " + id_ + ": table column count mismatch");
    for (int v : row)
      if (v < 0 || v >= n) throw SchemaError("oracle " + id_ + ": table entry out of range");
  }
  // Latin square check (left/right translations are bijections).
  for (int i = 0; i < n; ++i) {
    std::vector<bool> row_seen(static_cast<std::size_t>(n)), col_seen(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      if (row_seen[static_cast<std::size_t>(table_[i][j])] ||
          col_seen[static_cast<std::size_t>(table_[j][i])])
        throw SchemaError("oracle " + id_ + ": table is not a Latin square");
      row_seen[static_cast<std::size_t>(table_[i][j])] = true;
      col_seen[static_cast<std::size_t>(table_[j][i])] = true;
    }
  }
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) ok = table_[e][j] == j && table_[j][e] == j;
    if (ok) {
      identity_ = e;
      break;
    }
  }
  if (identity_ < 0) throw SchemaError("oracle " + id_ + ": table has no identity");
  if (n <= 128) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
            throw SchemaError("oracle " + id_ + ": table is not associative");
  }
  inverse_.assign(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table_[a][b] == identity_) inverse_[static_cast<std::size_t>(a)] = b;
  for (const auto& g : gens_) {
    auto it = std::find(elements_.begin(), elements_.end(), g);
    if (it == elements_.end())
      throw SchemaError("oracle " + id_ + ": generator " + g + " is not an element");
    gen_elements_.push_back(static_cast<int>(it - elements_.begin()));
  }
  build_geodesics();
  int reachable = 0;
  for (int e = 0; e < n; ++e)
    if (geodesic_len_[static_cast<std::size_t>(e)] >= 0) ++reachable;
  if (reachable != n)
    throw SchemaError("oracle " + id_ + ": declared generators do not generate the table group");
}

int FiniteTableOracle::eval(const SubWord& w) const {
  int acc = identity_;
  for (const auto& s : w) {
    if (s.gen < 0 || s.gen >= static_cast<int>(gens_.size()))
      throw SchemaError("oracle " + id_ + ": generator index out of range");
    int g = gen_elements_[static_cast<std::size_t>(s.gen)];
    long long e = s.exp;
    if (e < 0) {
      g = inverse_[static_cast<std::size_t>(g)];
      e = -e;
    }
    // reduce the exponent by the generator's order
    int ord = 1;
    for (int p = g; p != identity_; p = table_[p][g]) ++ord;
    e %= ord;
    for (long long i = 0; i < e; ++i) acc = table_[acc][g];
  }
  return acc;
}

void FiniteTableOracle::build_geodesics() const {
  std::call_once(geo_once_, [this]() {
    const int n = static_cast<int>(elements_.size());
    geodesic_word_.assign(static_cast<std::size_t>(n), SubWord{});
    geodesic_len_.assign(static_cast<std::size_t>(n), -1);
    // symmetrized generator list: declared order, then inverses
    std::vector<std::pair<int, int>> sym;  // (element, syllable as (gen idx, ±1))
    for (std::size_t i = 0; i < gen_elements_.size(); ++i)
      sym.emplace_back(gen_elements_[i], static_cast<int>(i) + 1);
    for (std::size_t i = 0; i < gen_elements_.size(); ++i)
      sym.emplace_back(inverse_[static_cast<std::size_t>(gen_elements_[i])],
                       -(static_cast<int>(i) + 1));
    std::deque<int> queue;
    geodesic_len_[static_cast<std::size_t>(identity_)] = 0;
    queue.push_back(identity_);
    while (!queue.empty()) {
      int cur = queue.front();
      queue.pop_front();
      for (const auto& [ge, syl] : sym) {
        int nxt = table_[cur][ge];
        if (geodesic_len_[static_cast<std::size_t>(nxt)] >= 0) continue;
        geodesic_len_[static_cast<std::size_t>(nxt)] =
            geodesic_len_[static_cast<std::size_t>(cur)] + 1;
        SubWord w = geodesic_word_[static_cast<std::size_t>(cur)];
        int gi = syl > 0 ? syl - 1 : -syl - 1;
        long long ex = syl > 0 ? 1 : -1;
        if (!w.empty() && w.back().gen == gi)
          w.back().exp += ex;
        else
          w.push_back({gi, ex});
        geodesic_word_[static_cast<std::size_t>(nxt)] = std::move(w);
        queue.push_back(nxt);
      }
    }
  });
}

std::optional<SubWord> FiniteTableOracle::canonical(const SubWord& w) const {
  build_geodesics();
  return geodesic_word_[static_cast<std::size_t>(eval(w))];
}

std::vector<SubWord> FiniteTableOracle::ball(long long radius) const {
  build_geodesics();
  std::vector<std::pair<int, int>> order;  // (len, element)
  for (int e = 0; e < static_cast<int>(elements_.size()); ++e) {
    int len = geodesic_len_[static_cast<std::size_t>(e)];
    if (len >= 0 && len <= radius) order.emplace_back(len, e);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<SubWord> out;
  for (const auto& [len, e] : order) out.push_back(geodesic_word_[static_cast<std::size_t>(e)]);
  return out;
}

bool FiniteTableOracle::ball_is_whole_group(long long radius) const {
  build_geodesics();
  for (int e = 0; e < static_cast<int>(elements_.size()); ++e)
    if (geodesic_len_[static_cast<std::size_t>(e)] > radius) return false;
  return true;
}

namespace {

SubWord explode(const SubWord& w) {
  SubWord out;
  for (const auto& s : w) {
    long long n = s.exp < 0 ? -s.exp : s.exp;
    long long step = s.exp < 0 ? -1 : 1;
    for (long long i = 0; i < n; ++i) out.push_back({s.gen, step});
  }
  return out;
}

// echelon form of the integer row span, via gcd row reduction
std::vector<std::vector<long long>> integer_echelon(std::vector<std::vector<long long>> rows) {
  if (rows.empty()) return rows;
  const std::size_t cols = rows[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    // gcd-out column c across rows [rank..)
    while (true) {
      std::size_t piv = rank;
      long long best = 0;
      for (std::size_t r = rank; r < rows.size(); ++r) {
        long long v = rows[r][c] < 0 ? -rows[r][c] : rows[r][c];
        if (v != 0 && (best == 0 || v < best)) {
          best = v;
          piv = r;
        }
      }
      if (best == 0) break;
      std::swap(rows[rank], rows[piv]);
      bool all_divide = true;
      for (std::size_t r = rank + 1; r < rows.size(); ++r) {
        if (rows[r][c] == 0) continue;
        long long q = rows[r][c] / rows[rank][c];
        for (std::size_t k = 0; k < cols; ++k) rows[r][k] -= q * rows[rank][k];
        if (rows[r][c] != 0) all_divide = false;
      }
      if (all_divide) break;
    }
    if (rows[rank][c] != 0) {
      if (rows[rank][c] < 0)
        for (std::size_t k = 0; k < cols; ++k) rows[rank][k] = -rows[rank][k];
      ++rank;
    }
  }
  rows.resize(rank);
  return rows;
}

bool lattice_member(const std::vector<std::vector<long long>>& echelon,
                    std::vector<long long> v) {
  for (const auto& row : echelon) {
    std::size_t c = 0;
    while (c < row.size() && row[c] == 0) ++c;
    if (c == row.size()) continue;
    if (v[c] % row[c] != 0) return false;
    long long q = v[c] / row[c];
    for (std::size_t k = 0; k < row.size(); ++k) v[k] -= q * row[k];
  }
  for (long long x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace

FpBfsOracle::FpBfsOracle(std::string id, std::vector<std::string> gens,
                         std::vector<SubWord> relators, long long ball_radius)
    : SubgroupOracle(std::move(id), std::move(gens)), radius_(ball_radius) {
  if (radius_ <= 0) throw SchemaError("oracle " + id_ + ": ball_radius must be positive");
  for (auto& r : relators) {
    auto red = free_reduce(r);
    if (red.empty()) continue;
    for (const auto& s : red)
      if (s.gen < 0 || s.gen >= static_cast<int>(gens_.size()))
        throw SchemaError("oracle " + id_ + ": relator generator index out of range");
    relators_.push_back(std::move(red));
  }
  std::set<std::string> shift_keys;
  for (const auto& r : relators_) {
    SubWord base = explode(r);
    max_relator_len_ = std::max<long long>(max_relator_len_,
                                           static_cast<long long>(base.size()));
    for (int sgn = 0; sgn < 2; ++sgn) {
      SubWord word = sgn == 0 ? base : explode(subword_inverse(r));
      for (std::size_t sh = 0; sh < word.size(); ++sh) {
        SubWord rot(word.begin() + static_cast<std::ptrdiff_t>(sh), word.end());
        rot.insert(rot.end(), word.begin(), word.begin() + static_cast<std::ptrdiff_t>(sh));
        auto key = subword_repr(rot);
        if (shift_keys.insert(key).second) relator_shifts_.push_back(std::move(rot));
      }
    }
  }
  std::vector<std::vector<long long>> rows;
  for (const auto& r : relators_) {
    std::vector<long long> row(gens_.size(), 0);
    for (const auto& s : r) row[static_cast<std::size_t>(s.gen)] += s.exp;
    rows.push_back(std::move(row));
  }
  ab_lattice_ = integer_echelon(std::move(rows));
}

TriState FpBfsOracle::abelian_nonidentity(const SubWord& w) const {
  std::vector<long long> v(gens_.size(), 0);
  for (const auto& s : w) v[static_cast<std::size_t>(s.gen)] += s.exp;
  bool zero = std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
  if (zero) return TriState::Unknown;  // abelianization cannot distinguish
  return lattice_member(ab_lattice_, v) ? TriState::Unknown : TriState::False;
}

std::optional<SubWord> FpBfsOracle::canonical(const SubWord& w) const {
  SubWord start = free_reduce(explode(w));
  if (static_cast<long long>(start.size()) > radius_ + max_relator_len_) return std::nullopt;
  {
    std::lock_guard<std::mutex> lk(memo_mu_);
    auto it = canon_memo_.find(subword_repr(start));
    if (it != canon_memo_.end()) return it->second;
  }
  const long long L =
      std::max<long long>(static_cast<long long>(start.size()), radius_) + max_relator_len_;
  const long long max_states = 200000;
  auto better = [](const SubWord& a, const SubWord& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].gen != b[i].gen) return a[i].gen < b[i].gen;
      if (a[i].exp != b[i].exp) return a[i].exp > b[i].exp;  // +1 before -1
    }
    return false;
  };
  SubWord best = start;
  std::unordered_set<std::string> seen;
  std::deque<SubWord> queue;
  seen.insert(subword_repr(start));
  queue.push_back(start);
  while (!queue.empty()) {
    SubWord cur = queue.front();
    queue.pop_front();
    if (better(cur, best)) best = cur;
    for (const auto& shift : relator_shifts_) {
      for (std::size_t gap = 0; gap <= cur.size(); ++gap) {
        SubWord next(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(gap));
        next.insert(next.end(), shift.begin(), shift.end());
        next.insert(next.end(), cur.begin() + static_cast<std::ptrdiff_t>(gap), cur.end());
        next = free_reduce(next);
        if (static_cast<long long>(next.size()) > L) continue;
        auto key = subword_repr(next);
        if (seen.count(key)) continue;
        if (static_cast<long long>(seen.size()) >= max_states) break;
        seen.insert(key);
        queue.push_back(std::move(next));
      }
    }
  }
  SubWord out = free_reduce(best);  // run-compress adjacent syllables
  {
    std::lock_guard<std::mutex> lk(memo_mu_);
    canon_memo_[subword_repr(start)] = out;
  }
  return out;
}

TriState FpBfsOracle::is_identity(const SubWord& w) const {
  SubWord start = free_reduce(explode(w));
  if (start.empty()) return TriState::True;
  auto key = subword_repr(start);
  {
    std::lock_guard<std::mutex> lk(memo_mu_);
    auto it = ident_memo_.find(key);
    if (it != ident_memo_.end()) return it->second;
  }
  TriState verdict = abelian_nonidentity(start);
  if (verdict != TriState::False) {
    verdict = TriState::Unknown;
    auto c = canonical(w);
    if (c && c->empty()) verdict = TriState::True;
  }
  {
    std::lock_guard<std::mutex> lk(memo_mu_);
    ident_memo_[key] = verdict;
  }
  return verdict;
}

}  // namespace relpres
