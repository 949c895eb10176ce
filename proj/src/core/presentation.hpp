#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "oracle.hpp"
#include "word.hpp"

namespace relpres {

class RelativePresentation;

// Construction record kept when a presentation was produced by the
// stable-letter constructor: which subgroup was consumed, where its
// generators map, and the base presentation it came from.
struct StableExtensionMeta {
  std::string k_id;
  std::string nu_id;
  std::vector<std::string> y_gens;            // positive names, now x-generators
  std::map<std::string, SubWord> iota;        // y name -> canonical element of nu
  long long m_const = 0;                      // max rewritten-relator length
  long long injectivity_radius = 0;           // iota checked injective on this ball
  std::shared_ptr<const RelativePresentation> source;
};

enum class RelatorTag : uint8_t { Plain, Rewritten, Stable };

struct PresentationMeta {
  std::string name;
  std::vector<std::string> provenance;
  std::optional<StableExtensionMeta> hnn;
};

class RelativePresentation {
public:
  RelativePresentation() = default;
  RelativePresentation(std::vector<std::string> x_gens,
                       std::vector<std::pair<std::string, OraclePtr>> subgroups,
                       bool stable);

  const std::vector<std::string>& x_gens() const { return x_gens_; }
  bool has_x(const std::string& name) const;
  bool stable() const { return stable_; }
  const std::map<std::string, OraclePtr>& subgroups() const { return subgroups_; }
  OraclePtr oracle(const std::string& id) const;         // throws on missing id
  OraclePtr maybe_oracle(const std::string& id) const;   // nullptr on missing id

  const std::vector<Word>& relators() const { return relators_; }
  const std::vector<RelatorTag>& relator_tags() const { return relator_tags_; }
  void add_relator(Word w, RelatorTag tag = RelatorTag::Plain);
  long long max_relator_len() const;

  PresentationMeta& meta() { return meta_; }
  const PresentationMeta& meta() const { return meta_; }

  // Word grammar (see README): whitespace-separated tokens, subgroup
  // letters written as ID[...]. parse keeps the letter sequence exactly
  // as written; only subgroup-letter elements are canonicalized.
  Word parse_word(const std::string& text) const;
  std::string render_word(const Word& w) const;
  SubWord parse_subword(const std::string& text, const SubgroupOracle& o) const;
  std::string render_subword(const SubWord& w, const SubgroupOracle& o) const;

  // the subgroup (if exactly one) declaring this generator name
  std::optional<std::string> unique_subgroup_of_gen(const std::string& gen) const;

  bool letters_valid(const Word& w, std::string* why = nullptr) const;

private:
  std::vector<std::string> x_gens_;
  std::map<std::string, OraclePtr> subgroups_;
  std::vector<Word> relators_;
  std::vector<RelatorTag> relator_tags_;
  bool stable_ = false;
  PresentationMeta meta_;
};

// Which ordinary-presentation reading a diagram is checked against.
//   Base: relators + one all-words-equal-1 family per subgroup, the
//         distinguished subgroup K kept as a letter alphabet.
//   Aux:  K-letters expanded into words over its generator set Y; the
//         K family becomes a family over Y-words.
//   Full: stable-letter presentation; 4-letter conjugation cells live here.
enum class ViewVariant : uint8_t { Base, Aux, Full };

enum class CellTag : uint8_t { R, RPrime, T, S, L, Q, Outer, Hole };
std::string to_string(CellTag tag);
std::optional<CellTag> cell_tag_from_string(const std::string& s);

struct OrdinaryView {
  const RelativePresentation* pres = nullptr;
  ViewVariant variant = ViewVariant::Full;
  std::string k_id;  // the distinguished subgroup for L/Q families

  // Does the cyclic word w belong to the family `tag`? For S-cells lambda
  // names the subgroup. Three-valued through the oracles.
  TriState in_family(const Word& w, CellTag tag, const std::string& lambda = {}) const;

  // K-letter view of an all-Y word (Aux/Full): maps XGen letters named by
  // K's generators to a K-element; nullopt when a letter is not a Y name.
  std::optional<SubWord> y_word_to_k(const Word& w) const;
  const SubgroupOracle* k_oracle() const;  // may live on the source presentation
};

struct Retraction {
  std::shared_ptr<const RelativePresentation> source;
  std::shared_ptr<const RelativePresentation> target;
  // images of source generators; stable letter under key "t"; x-letters
  // absent from the map are fixed. Subgroup letters are always fixed.
  std::map<std::string, Word> gen_images;
  Word apply(const Word& w) const;
};

struct HnnOptions {
  long long injectivity_radius = 4;
  GeodesicBudget geodesic_budget = {};
};

RelativePresentation hnn_extension(const RelativePresentation& h, const std::string& k_id,
                                   const std::string& nu_id,
                                   const std::map<std::string, std::string>& iota_text,
                                   const HnnOptions& opts = {});

RelativePresentation free_product(const RelativePresentation& a, const RelativePresentation& b,
                                  std::vector<std::string>* rename_log = nullptr);

struct AmalgamResult {
  RelativePresentation hnn;  // stable-letter presentation of the free product
  RelativePresentation amalgam;
  Retraction retraction;     // hnn -> amalgam, stable letter to the empty word
};

AmalgamResult amalgam(const RelativePresentation& a, const RelativePresentation& b,
                      const std::string& k_id, const std::string& eta_id,
                      const std::map<std::string, std::string>& xi_text,
                      const HnnOptions& opts = {});

RelativePresentation retract_presentation(const Retraction& r);

// builds target + applies; used by amalgam and exposed for reuse
Retraction make_retraction(std::shared_ptr<const RelativePresentation> source,
                           std::map<std::string, Word> gen_images,
                           std::vector<std::string> target_x_gens, bool target_stable);

// Subgroup-word grammar over a plain generator list ("x^3 y^-2"), usable
// before any oracle exists (the loader needs it for oracle construction).
SubWord parse_subword_text(const std::string& text, const std::vector<std::string>& gens,
                           const std::string& context);
std::string render_subword_text(const SubWord& w, const std::vector<std::string>& gens);

}  // namespace relpres
