#include "presentation.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "normalize.hpp"

namespace relpres {

namespace {

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

[[noreturn]] void parse_fail(const std::string& text, std::size_t pos, const std::string& why) {
  std::ostringstream os;
  os << "word parse error at offset " << pos << ": " << why << " (input: \"" << text << "\")";
  throw ParseError(os.str());
}

struct RawToken {
  std::string text;
  std::size_t offset;
};

// whitespace-separated tokens; brackets may enclose spaces
std::vector<RawToken> tokenize(const std::string& text) {
  std::vector<RawToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    int depth = 0;
    while (i < text.size()) {
      char c = text[i];
      if (c == '[') ++depth;
      if (c == ']') {
        if (depth == 0) parse_fail(text, i, "unmatched ']'");
        --depth;
      }
      if (depth == 0 && std::isspace(static_cast<unsigned char>(c))) break;
      ++i;
    }
    if (depth != 0) parse_fail(text, start, "unmatched '['");
    out.push_back({text.substr(start, i - start), start});
  }
  return out;
}

}  // namespace

RelativePresentation::RelativePresentation(
    std::vector<std::string> x_gens, std::vector<std::pair<std::string, OraclePtr>> subgroups,
    bool stable)
    : x_gens_(std::move(x_gens)), stable_(stable) {
  std::set<std::string> seen;
  for (const auto& x : x_gens_) {
    if (!is_identifier(x) || x == "t")
      throw SchemaError("bad generator name '" + x + "' ('t' is reserved)");
    if (!seen.insert(x).second) throw SchemaError("duplicate generator '" + x + "'");
  }
  for (auto& [id, o] : subgroups) {
    if (!is_identifier(id) || id == "t") throw SchemaError("bad subgroup id '" + id + "'");
    if (!o) throw SchemaError("null oracle for subgroup '" + id + "'");
    if (o->id() != id) throw SchemaError("oracle id mismatch for subgroup '" + id + "'");
    if (seen.count(id)) throw SchemaError("subgroup id '" + id + "' collides with a generator");
    if (!subgroups_.emplace(id, std::move(o)).second)
      throw SchemaError("duplicate subgroup id '" + id + "'");
  }
}

bool RelativePresentation::has_x(const std::string& name) const {
  return std::find(x_gens_.begin(), x_gens_.end(), name) != x_gens_.end();
}

OraclePtr RelativePresentation::oracle(const std::string& id) const {
  auto it = subgroups_.find(id);
  if (it == subgroups_.end()) throw SchemaError("unknown subgroup '" + id + "'");
  return it->second;
}

OraclePtr RelativePresentation::maybe_oracle(const std::string& id) const {
  auto it = subgroups_.find(id);
  return it == subgroups_.end() ? nullptr : it->second;
}

void RelativePresentation::add_relator(Word w, RelatorTag tag) {
  std::string why;
  if (!letters_valid(w, &why)) throw SchemaError("bad relator: " + why);
  relators_.push_back(std::move(w));
  relator_tags_.push_back(tag);
}

long long RelativePresentation::max_relator_len() const {
  long long m = 0;
  for (const auto& r : relators_) m = std::max<long long>(m, static_cast<long long>(r.size()));
  return m;
}

bool RelativePresentation::letters_valid(const Word& w, std::string* why) const {
  for (const auto& l : w) {
    switch (l.kind) {
      case LetterKind::XGen:
        if (!has_x(l.name)) {
          if (why) *why = "undeclared generator '" + l.name + "'";
          return false;
        }
        if (l.sign != 1 && l.sign != -1) {
          if (why) *why = "bad sign on generator '" + l.name + "'";
          return false;
        }
        break;
      case LetterKind::Stable:
        if (!stable_) {
          if (why) *why = "stable letter used but not declared";
          return false;
        }
        break;
      case LetterKind::Subgroup: {
        auto o = maybe_oracle(l.lambda);
        if (!o) {
          if (why) *why = "undeclared subgroup '" + l.lambda + "'";
          return false;
        }
        if (l.element.empty()) {
          if (why) *why = "identity subgroup letter for '" + l.lambda + "'";
          return false;
        }
        for (const auto& s : l.element)
          if (s.gen < 0 || s.gen >= static_cast<int>(o->gens().size()) || s.exp == 0) {
            if (why) *why = "malformed element for subgroup '" + l.lambda + "'";
            return false;
          }
        break;
      }
    }
  }
  return true;
}

SubWord parse_subword_text(const std::string& text, const std::vector<std::string>& gens,
                           const std::string& context) {
  SubWord out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    std::string name = tok;
    long long exp = 1;
    auto caret = tok.find('^');
    if (caret != std::string::npos) {
      name = tok.substr(0, caret);
      std::string e = tok.substr(caret + 1);
      try {
        std::size_t used = 0;
        exp = std::stoll(e, &used);
        if (used != e.size()) throw std::invalid_argument(e);
      } catch (const std::exception&) {
        throw ParseError("bad exponent '" + e + "' in subgroup word \"" + text + "\"");
      }
    }
    auto it = std::find(gens.begin(), gens.end(), name);
    if (it == gens.end())
      throw ParseError("'" + name + "' is not a generator of " + context);
    if (exp != 0) out.push_back({static_cast<int>(it - gens.begin()), exp});
  }
  return out;
}

std::string render_subword_text(const SubWord& w, const std::vector<std::string>& gens) {
  std::string out;
  for (const auto& s : w) {
    if (!out.empty()) out += ' ';
    out += gens.at(static_cast<std::size_t>(s.gen));
    if (s.exp != 1) {
      out += '^';
      out += std::to_string(s.exp);
    }
  }
  return out;
}

SubWord RelativePresentation::parse_subword(const std::string& text,
                                            const SubgroupOracle& o) const {
  return parse_subword_text(text, o.gens(), "subgroup " + o.id());
}

std::string RelativePresentation::render_subword(const SubWord& w,
                                                 const SubgroupOracle& o) const {
  return render_subword_text(w, o.gens());
}

Word RelativePresentation::parse_word(const std::string& text) const {
  Word out;
  for (const auto& tok : tokenize(text)) {
    const std::string& t = tok.text;
    auto bracket = t.find('[');
    if (bracket != std::string::npos) {
      if (t.back() != ']') parse_fail(text, tok.offset, "expected ']' at token end");
      std::string id = t.substr(0, bracket);
      if (!is_identifier(id)) parse_fail(text, tok.offset, "bad subgroup id '" + id + "'");
      auto o = maybe_oracle(id);
      if (!o) parse_fail(text, tok.offset, "undeclared subgroup '" + id + "'");
      std::string inner = t.substr(bracket + 1, t.size() - bracket - 2);
      SubWord raw = parse_subword(inner, *o);
      auto canon = o->canonical(raw);
      if (!canon)
        parse_fail(text, tok.offset, "element of " + id + " outside the oracle's ball");
      if (o->is_identity(*canon) == TriState::True)
        parse_fail(text, tok.offset, "identity subgroup letter " + id + "[" + inner + "]");
      out.push_back(Letter::sub(id, std::move(*canon)));
      continue;
    }
    std::string name = t;
    int sign = 1;
    auto caret = t.find('^');
    if (caret != std::string::npos) {
      name = t.substr(0, caret);
      if (t.substr(caret + 1) != "-1")
        parse_fail(text, tok.offset, "only ^-1 is allowed on generators, got '" + t + "'");
      sign = -1;
    }
    if (!is_identifier(name)) parse_fail(text, tok.offset, "bad token '" + t + "'");
    if (name == "t") {
      if (!stable_) parse_fail(text, tok.offset, "stable letter not declared here");
      out.push_back(Letter::stable(sign));
    } else if (has_x(name)) {
      out.push_back(Letter::x(name, sign));
    } else {
      parse_fail(text, tok.offset, "undeclared identifier '" + name + "'");
    }
  }
  return out;
}

std::string RelativePresentation::render_word(const Word& w) const {
  std::string out;
  for (const auto& l : w) {
    if (!out.empty()) out += ' ';
    switch (l.kind) {
      case LetterKind::XGen:
        out += l.name;
        if (l.sign < 0) out += "^-1";
        break;
      case LetterKind::Stable:
        out += 't';
        if (l.sign < 0) out += "^-1";
        break;
      case LetterKind::Subgroup: {
        auto o = oracle(l.lambda);
        out += l.lambda;
        out += '[';
        out += render_subword(l.element, *o);
        out += ']';
        break;
      }
    }
  }
  return out;
}

std::optional<std::string> RelativePresentation::unique_subgroup_of_gen(
    const std::string& gen) const {
  std::optional<std::string> found;
  for (const auto& [id, o] : subgroups_) {
    if (o->gen_index(gen) >= 0) {
      if (found) return std::nullopt;  // ambiguous
      found = id;
    }
  }
  return found;
}

std::string to_string(CellTag tag) {
  switch (tag) {
    case CellTag::R: return "R";
    case CellTag::RPrime: return "R'";
    case CellTag::T: return "T";
    case CellTag::S: return "S";
    case CellTag::L: return "L";
    case CellTag::Q: return "Q";
    case CellTag::Outer: return "outer";
    case CellTag::Hole: return "hole";
  }
  return "?";
}

std::optional<CellTag> cell_tag_from_string(const std::string& s) {
  if (s == "R") return CellTag::R;
  if (s == "R'" || s == "Rp" || s == "R_prime") return CellTag::RPrime;
  if (s == "T") return CellTag::T;
  if (s == "S") return CellTag::S;
  if (s == "L") return CellTag::L;
  if (s == "Q") return CellTag::Q;
  if (s == "outer") return CellTag::Outer;
  if (s == "hole") return CellTag::Hole;
  return std::nullopt;
}

const SubgroupOracle* OrdinaryView::k_oracle() const {
  if (k_id.empty()) return nullptr;
  if (auto o = pres->maybe_oracle(k_id)) return o.get();
  if (pres->meta().hnn && pres->meta().hnn->source) {
    if (auto o = pres->meta().hnn->source->maybe_oracle(k_id)) return o.get();
  }
  return nullptr;
}

std::optional<SubWord> OrdinaryView::y_word_to_k(const Word& w) const {
  const SubgroupOracle* k = k_oracle();
  if (!k) return std::nullopt;
  SubWord out;
  for (const auto& l : w) {
    if (l.kind != LetterKind::XGen) return std::nullopt;
    int gi = k->gen_index(l.name);
    if (gi < 0) return std::nullopt;
    out.push_back({gi, l.sign});
  }
  return out;
}

namespace {

bool is_cyclic_perm_of_relator(const Word& w, const Word& relator) {
  if (w.size() != relator.size()) return false;
  for (const Word& cand : {relator, invert(relator)})
    for (std::size_t r = 0; r < cand.size(); ++r)
      if (compare_words(w, rotated(cand, r)) == 0) return true;
  return w.empty() && relator.empty();
}

}  // namespace

TriState OrdinaryView::in_family(const Word& w, CellTag tag, const std::string& lambda) const {
  switch (tag) {
    case CellTag::R:
    case CellTag::RPrime:
    case CellTag::T: {
      RelatorTag want = tag == CellTag::R       ? RelatorTag::Plain
                        : tag == CellTag::RPrime ? RelatorTag::Rewritten
                                                 : RelatorTag::Stable;
      const auto& rels = pres->relators();
      const auto& tags = pres->relator_tags();
      for (std::size_t i = 0; i < rels.size(); ++i)
        if (tags[i] == want && is_cyclic_perm_of_relator(w, rels[i])) return TriState::True;
      return TriState::False;
    }
    case CellTag::S: {
      if (w.empty()) return TriState::False;
      std::string lam = lambda;
      for (const auto& l : w) {
        if (l.kind != LetterKind::Subgroup) return TriState::False;
        if (lam.empty()) lam = l.lambda;
        if (l.lambda != lam) return TriState::False;
      }
      if (variant == ViewVariant::Base && lam == k_id) return TriState::False;  // that's L
      auto o = pres->maybe_oracle(lam);
      if (!o) return TriState::False;
      SubWord prod;
      for (const auto& l : w) prod.insert(prod.end(), l.element.begin(), l.element.end());
      return o->is_identity(prod);
    }
    case CellTag::L: {
      if (variant != ViewVariant::Base || w.empty()) return TriState::False;
      const SubgroupOracle* k = k_oracle();
      if (!k) return TriState::False;
      SubWord prod;
      for (const auto& l : w) {
        if (l.kind != LetterKind::Subgroup || l.lambda != k_id) return TriState::False;
        prod.insert(prod.end(), l.element.begin(), l.element.end());
      }
      return k->is_identity(prod);
    }
    case CellTag::Q: {
      if (variant != ViewVariant::Aux || w.empty()) return TriState::False;
      auto kw = y_word_to_k(w);
      if (!kw) return TriState::False;
      const SubgroupOracle* k = k_oracle();
      return k ? k->is_identity(*kw) : TriState::Unknown;
    }
    case CellTag::Outer:
    case CellTag::Hole:
      return TriState::False;
  }
  return TriState::False;
}

Word Retraction::apply(const Word& w) const {
  Word out;
  for (const auto& l : w) {
    const Word* image = nullptr;
    if (l.kind == LetterKind::Stable) {
      auto it = gen_images.find("t");
      if (it != gen_images.end()) image = &it->second;
    } else if (l.kind == LetterKind::XGen) {
      auto it = gen_images.find(l.name);
      if (it != gen_images.end()) image = &it->second;
    }
    if (!image) {
      out.push_back(l);
      continue;
    }
    Word piece = l.sign < 0 ? invert(*image) : *image;
    out.insert(out.end(), piece.begin(), piece.end());
  }
  return out;
}

Retraction make_retraction(std::shared_ptr<const RelativePresentation> source,
                           std::map<std::string, Word> gen_images,
                           std::vector<std::string> target_x_gens, bool target_stable) {
  if (!source) throw SchemaError("retraction: null source");
  std::vector<std::pair<std::string, OraclePtr>> subs;
  for (const auto& [id, o] : source->subgroups()) subs.emplace_back(id, o);
  auto target = std::make_shared<RelativePresentation>(std::move(target_x_gens), subs,
                                                       target_stable);
  Retraction r;
  r.source = std::move(source);
  r.gen_images = std::move(gen_images);
  // fixed letters must stay inside the target alphabet
  for (const auto& x : target->x_gens())
    if (!r.source->has_x(x)) throw SchemaError("retraction target generator '" + x +
                                               "' is not a source generator");
  for (std::size_t i = 0; i < r.source->relators().size(); ++i) {
    Word image = r.apply(r.source->relators()[i]);
    Word norm = normalize(image, *target);
    if (norm.empty()) continue;  // trivial image relators are dropped
    target->add_relator(std::move(norm), RelatorTag::Plain);
  }
  target->meta().name = r.source->meta().name + "-retract";
  target->meta().provenance.push_back("retract of '" + r.source->meta().name + "'");
  r.target = std::move(target);
  return r;
}

RelativePresentation retract_presentation(const Retraction& r) {
  if (!r.target) throw SchemaError("retraction has no target");
  return *r.target;
}

RelativePresentation hnn_extension(const RelativePresentation& h, const std::string& k_id,
                                   const std::string& nu_id,
                                   const std::map<std::string, std::string>& iota_text,
                                   const HnnOptions& opts) {
  if (h.stable())
    throw SchemaError("base presentation already uses the stable letter");
  auto K = h.oracle(k_id);
  auto Nu = h.oracle(nu_id);
  if (k_id == nu_id) throw SchemaError("associated subgroup must differ from its target");

  const std::vector<std::string>& Y = K->gens();
  std::map<std::string, SubWord> iota;
  for (const auto& y : Y) {
    auto it = iota_text.find(y);
    if (it == iota_text.end())
      throw SchemaError("iota image missing for generator '" + y + "'");
    SubWord raw = h.parse_subword(it->second, *Nu);
    auto canon = Nu->canonical(raw);
    if (!canon) throw SchemaError("iota image of '" + y + "' is outside the oracle's ball");
    if (canon->empty())
      throw SchemaError("iota image of '" + y + "' is the identity; not a monomorphism");
    iota[y] = std::move(*canon);
  }
  for (const auto& [y, img] : iota_text) {
    if (K->gen_index(y) < 0)
      throw SchemaError("iota maps unknown generator '" + y + "'");
    (void)img;
  }

  auto apply_iota = [&](const SubWord& u) -> std::optional<SubWord> {
    SubWord image;
    for (const auto& s : u) {
      SubWord g = iota.at(K->gens().at(static_cast<std::size_t>(s.gen)));
      long long n = s.exp < 0 ? -s.exp : s.exp;
      SubWord piece = s.exp < 0 ? subword_inverse(g) : g;
      for (long long i = 0; i < n; ++i) image.insert(image.end(), piece.begin(), piece.end());
    }
    return Nu->canonical(image);
  };

  // injectivity spot-check on the enumerable ball
  {
    std::map<std::string, std::string> images_seen;
    for (const auto& u : K->ball(opts.injectivity_radius)) {
      auto img = apply_iota(u);
      if (!img)
        throw SchemaError("iota image left the oracle's ball during the injectivity check");
      auto key = SubgroupOracle::subword_repr(*img);
      auto ukey = SubgroupOracle::subword_repr(u);
      auto [it, fresh] = images_seen.emplace(key, ukey);
      if (!fresh && it->second != ukey)
        throw SchemaError("iota is not injective on the checked ball (radius " +
                          std::to_string(opts.injectivity_radius) + ")");
    }
  }

  std::vector<std::string> new_x = h.x_gens();
  for (const auto& y : Y) {
    if (h.has_x(y))
      throw SchemaError("generator name '" + y + "' collides with an existing generator");
    new_x.push_back(y);
  }
  std::vector<std::pair<std::string, OraclePtr>> subs;
  for (const auto& [id, o] : h.subgroups())
    if (id != k_id) subs.emplace_back(id, o);
  for (const auto& y : Y)
    for (const auto& [id, o] : subs)
      if (id == y) throw SchemaError("generator '" + y + "' collides with subgroup id");

  RelativePresentation g(std::move(new_x), subs, true);

  long long m_const = 0;
  for (const auto& r : h.relators()) {
    Word rewritten;
    for (const auto& l : r) {
      if (l.kind == LetterKind::Subgroup && l.lambda == k_id) {
        auto geo = K->geodesic(l.element, opts.geodesic_budget);
        if (geo.status != TriState::True)
          throw SchemaError(
              "relator letter of '" + k_id +
              "' could not be rewritten over its generators at the configured budget");
        const std::size_t half = Y.size();
        for (int idx : geo.witness) {
          bool inv = static_cast<std::size_t>(idx) >= half;
          const std::string& name = Y.at(inv ? static_cast<std::size_t>(idx) - half
                                             : static_cast<std::size_t>(idx));
          rewritten.push_back(Letter::x(name, inv ? -1 : 1));
        }
      } else {
        rewritten.push_back(l);
      }
    }
    m_const = std::max<long long>(m_const, static_cast<long long>(rewritten.size()));
    g.add_relator(std::move(rewritten), RelatorTag::Rewritten);
  }
  for (const auto& y : Y) {
    Word t_rel{Letter::stable(-1), Letter::x(y, 1), Letter::stable(1),
               Letter::sub(nu_id, subword_inverse(iota.at(y)))};
    g.add_relator(std::move(t_rel), RelatorTag::Stable);
  }

  StableExtensionMeta meta;
  meta.k_id = k_id;
  meta.nu_id = nu_id;
  meta.y_gens = Y;
  meta.iota = std::move(iota);
  meta.m_const = m_const;
  meta.injectivity_radius = opts.injectivity_radius;
  meta.source = std::make_shared<const RelativePresentation>(h);
  g.meta().name = h.meta().name.empty() ? "stable-extension" : h.meta().name + "-ext";
  g.meta().provenance.push_back("stable-letter extension over " + k_id + " -> " + nu_id);
  g.meta().hnn = std::move(meta);
  return g;
}

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int i = 2;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!taken.count(cand)) return cand;
  }
}

}  // namespace

RelativePresentation free_product(const RelativePresentation& a, const RelativePresentation& b,
                                  std::vector<std::string>* rename_log) {
  if (a.stable() || b.stable())
    throw SchemaError("free factors may not use the stable letter");
  std::set<std::string> taken;
  for (const auto& x : a.x_gens()) taken.insert(x);
  for (const auto& [id, o] : a.subgroups()) taken.insert(id);

  std::map<std::string, std::string> x_rename, sub_rename;
  std::vector<std::string> new_x = a.x_gens();
  for (const auto& x : b.x_gens()) {
    std::string name = fresh_name(x, taken);
    if (name != x) {
      x_rename[x] = name;
      if (rename_log) rename_log->push_back("generator " + x + " -> " + name);
    }
    taken.insert(name);
    new_x.push_back(name);
  }
  std::vector<std::pair<std::string, OraclePtr>> subs;
  for (const auto& [id, o] : a.subgroups()) subs.emplace_back(id, o);
  for (const auto& [id, o] : b.subgroups()) {
    std::string name = fresh_name(id, taken);
    if (name != id) {
      sub_rename[id] = name;
      if (rename_log) rename_log->push_back("subgroup " + id + " -> " + name);
    }
    taken.insert(name);
    subs.emplace_back(name, name == id ? o : OraclePtr(o->clone_with_id(name)));
  }
  RelativePresentation out(std::move(new_x), subs, false);
  for (std::size_t i = 0; i < a.relators().size(); ++i)
    out.add_relator(a.relators()[i], a.relator_tags()[i]);
  for (const auto& r : b.relators()) {
    Word w;
    for (Letter l : r) {
      if (l.kind == LetterKind::XGen) {
        auto it = x_rename.find(l.name);
        if (it != x_rename.end()) l.name = it->second;
      } else if (l.kind == LetterKind::Subgroup) {
        auto it = sub_rename.find(l.lambda);
        if (it != sub_rename.end()) l.lambda = it->second;
      }
      w.push_back(std::move(l));
    }
    out.add_relator(std::move(w), RelatorTag::Plain);
  }
  out.meta().name = (a.meta().name.empty() ? "A" : a.meta().name) + "*" +
                    (b.meta().name.empty() ? "B" : b.meta().name);
  out.meta().provenance.push_back("free product");
  for (const auto& [from, to] : x_rename)
    out.meta().provenance.push_back("renamed generator " + from + " -> " + to);
  for (const auto& [from, to] : sub_rename)
    out.meta().provenance.push_back("renamed subgroup " + from + " -> " + to);
  return out;
}

AmalgamResult amalgam(const RelativePresentation& a, const RelativePresentation& b,
                      const std::string& k_id, const std::string& eta_id,
                      const std::map<std::string, std::string>& xi_text,
                      const HnnOptions& opts) {
  if (!a.maybe_oracle(k_id))
    throw SchemaError("amalgamated subgroup '" + k_id + "' must live in the first factor");
  if (!b.maybe_oracle(eta_id))
    throw SchemaError("target subgroup '" + eta_id + "' must live in the second factor");
  std::vector<std::string> renames;
  RelativePresentation fp = free_product(a, b, &renames);
  // identifiers may have been renamed in the second factor
  std::string eta = eta_id;
  for (const auto& log : renames) {
    auto pos = log.find(" -> ");
    if (log.rfind("subgroup " + eta_id + " ", 0) == 0 && pos != std::string::npos)
      eta = log.substr(pos + 4);
  }
  if (k_id == eta) throw SchemaError("degenerate amalgam: the two subgroups coincide");

  AmalgamResult res;
  res.hnn = hnn_extension(fp, k_id, eta, xi_text, opts);
  auto source = std::make_shared<const RelativePresentation>(res.hnn);
  std::map<std::string, Word> images;
  images["t"] = Word{};  // stable letter dies
  Retraction r = make_retraction(source, std::move(images), source->x_gens(), false);
  res.amalgam = *r.target;
  res.amalgam.meta().name = (a.meta().name.empty() ? "A" : a.meta().name) + "+" +
                            (b.meta().name.empty() ? "B" : b.meta().name) + "-amalgam";
  res.retraction = std::move(r);
  return res;
}

}  // namespace relpres
