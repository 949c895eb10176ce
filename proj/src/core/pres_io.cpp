#include "pres_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace relpres {

using nlohmann::json;

namespace {

std::vector<std::string> symmetrize_x(std::vector<std::string> names,
                                      std::vector<std::string>* notes) {
  std::vector<std::string> out;
  bool fixed = false;
  for (auto& n : names) {
    std::string name = n;
    auto caret = name.find('^');
    if (caret != std::string::npos) {
      if (name.substr(caret) != "^-1") throw SchemaError("bad x_gens entry '" + n + "'");
      name = name.substr(0, caret);
      fixed = true;
    }
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  }
  if (fixed && notes) notes->push_back("x_gens auto-symmetrized (inverse entries folded)");
  return out;
}

OraclePtr oracle_from_json(const std::string& id, const json& j) {
  if (!j.is_object()) throw SchemaError("subgroup '" + id + "': expected an object");
  std::string backend = j.value("backend", "");
  std::vector<std::string> gens = j.value("generators", std::vector<std::string>{});

  std::shared_ptr<SubgroupOracle> o;
  if (backend == "free") {
    o = std::make_shared<FreeOracle>(id, gens);
  } else if (backend == "free_abelian") {
    o = std::make_shared<FreeAbelianOracle>(id, gens);
  } else if (backend == "fp_bfs") {
    std::vector<SubWord> rels;
    for (const auto& r : j.value("relators", std::vector<std::string>{}))
      rels.push_back(parse_subword_text(r, gens, "subgroup " + id));
    long long radius = j.value("ball_radius", 8LL);
    o = std::make_shared<FpBfsOracle>(id, gens, std::move(rels), radius);
  } else if (backend == "finite_table") {
    std::vector<std::string> elements = j.value("elements", std::vector<std::string>{});
    std::vector<std::vector<int>> table = j.value("table", std::vector<std::vector<int>>{});
    o = std::make_shared<FiniteTableOracle>(id, elements, std::move(table), gens);
  } else {
    throw SchemaError("subgroup '" + id + "': unknown backend '" + backend + "'");
  }
  if (j.contains("omega")) {
    std::vector<SubWord> omega;
    for (const auto& w : j.at("omega").get<std::vector<std::string>>())
      omega.push_back(parse_subword_text(w, gens, "subgroup " + id));
    o->set_omega(std::move(omega));
  }
  if (j.contains("extra_gen_sets")) {
    for (const auto& [name, arr] : j.at("extra_gen_sets").items()) {
      std::vector<SubWord> positives;
      for (const auto& w : arr.get<std::vector<std::string>>())
        positives.push_back(parse_subword_text(w, gens, "subgroup " + id));
      o->register_gen_set(name, positives);
    }
  }
  return o;
}

json oracle_to_json(const SubgroupOracle& o) {
  json j;
  j["backend"] = o.backend_name();
  j["generators"] = o.gens();
  if (o.backend_name() == "fp_bfs") {
    const auto& fp = dynamic_cast<const FpBfsOracle&>(o);
    std::vector<std::string> rels;
    for (const auto& r : fp.relators()) rels.push_back(render_subword_text(r, o.gens()));
    j["relators"] = rels;
    j["ball_radius"] = fp.ball_radius();
  } else if (o.backend_name() == "finite_table") {
    const auto& ft = dynamic_cast<const FiniteTableOracle&>(o);
    j["elements"] = ft.element_names();
    std::vector<std::vector<int>> table;
    for (int a = 0; a < ft.order(); ++a) {
      std::vector<int> row;
      for (int b = 0; b < ft.order(); ++b) row.push_back(ft.mul(a, b));
      table.push_back(std::move(row));
    }
    j["table"] = table;
  }
  if (o.omega()) {
    std::vector<std::string> om;
    for (const auto& w : *o.omega()) om.push_back(render_subword_text(w, o.gens()));
    j["omega"] = om;
  }
  if (!o.extra_gen_sets().empty()) {
    json sets = json::object();
    for (const auto& [name, set] : o.extra_gen_sets()) {
      std::vector<std::string> words;
      // stored symmetrized; emit only the declared half
      for (std::size_t i = 0; i < set.gens.size() / 2; ++i)
        words.push_back(render_subword_text(set.gens[i], o.gens()));
      sets[name] = words;
    }
    j["extra_gen_sets"] = sets;
  }
  return j;
}

RelativePresentation presentation_from_json(const json& j);

json presentation_to_json(const RelativePresentation& p) {
  json j;
  j["x_gens"] = p.x_gens();
  json subs = json::object();
  for (const auto& [id, o] : p.subgroups()) subs[id] = oracle_to_json(*o);
  j["subgroups"] = subs;
  std::vector<std::string> rels;
  for (const auto& r : p.relators()) rels.push_back(p.render_word(r));
  j["relators"] = rels;
  bool any_tagged = false;
  for (auto t : p.relator_tags())
    if (t != RelatorTag::Plain) any_tagged = true;
  if (any_tagged) {
    std::vector<std::string> tags;
    for (auto t : p.relator_tags())
      tags.push_back(t == RelatorTag::Plain ? "R" : t == RelatorTag::Rewritten ? "R'" : "T");
    j["relator_tags"] = tags;
  }
  j["stable"] = p.stable();
  json meta = json::object();
  if (!p.meta().name.empty()) meta["name"] = p.meta().name;
  if (!p.meta().provenance.empty()) meta["provenance"] = p.meta().provenance;
  if (p.meta().hnn) {
    const auto& h = *p.meta().hnn;
    json hj;
    hj["k"] = h.k_id;
    hj["nu"] = h.nu_id;
    hj["y_gens"] = h.y_gens;
    json iota = json::object();
    const SubgroupOracle& nu = *p.oracle(h.nu_id);
    for (const auto& [y, img] : h.iota) iota[y] = render_subword_text(img, nu.gens());
    hj["iota"] = iota;
    hj["m_const"] = h.m_const;
    hj["injectivity_radius"] = h.injectivity_radius;
    if (h.source) hj["source"] = presentation_to_json(*h.source);
    meta["hnn"] = hj;
  }
  j["meta"] = meta;
  return j;
}

RelativePresentation presentation_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("presentation: expected a JSON object");
  std::vector<std::string> notes;
  std::vector<std::string> x =
      symmetrize_x(j.value("x_gens", std::vector<std::string>{}), &notes);
  std::vector<std::pair<std::string, OraclePtr>> subs;
  if (j.contains("subgroups")) {
    if (!j.at("subgroups").is_object()) throw SchemaError("subgroups: expected an object");
    for (const auto& [id, sj] : j.at("subgroups").items())
      subs.emplace_back(id, oracle_from_json(id, sj));
  }
  RelativePresentation p(std::move(x), std::move(subs), j.value("stable", false));

  std::vector<RelatorTag> tags;
  if (j.contains("relator_tags")) {
    for (const auto& t : j.at("relator_tags").get<std::vector<std::string>>()) {
      if (t == "R") tags.push_back(RelatorTag::Plain);
      else if (t == "R'") tags.push_back(RelatorTag::Rewritten);
      else if (t == "T") tags.push_back(RelatorTag::Stable);
      else throw SchemaError("unknown relator tag '" + t + "'");
    }
  }
  std::size_t idx = 0;
  for (const auto& r : j.value("relators", std::vector<std::string>{})) {
    RelatorTag tag = idx < tags.size() ? tags[idx] : RelatorTag::Plain;
    p.add_relator(p.parse_word(r), tag);
    ++idx;
  }
  if (!tags.empty() && tags.size() != p.relators().size())
    throw SchemaError("relator_tags length does not match relators");

  if (j.contains("meta")) {
    const json& meta = j.at("meta");
    p.meta().name = meta.value("name", "");
    p.meta().provenance = meta.value("provenance", std::vector<std::string>{});
    if (meta.contains("hnn")) {
      const json& hj = meta.at("hnn");
      StableExtensionMeta h;
      h.k_id = hj.value("k", "");
      h.nu_id = hj.value("nu", "");
      h.y_gens = hj.value("y_gens", std::vector<std::string>{});
      h.m_const = hj.value("m_const", 0LL);
      h.injectivity_radius = hj.value("injectivity_radius", 0LL);
      if (hj.contains("source"))
        h.source = std::make_shared<const RelativePresentation>(
            presentation_from_json(hj.at("source")));
      if (hj.contains("iota")) {
        auto nu = p.maybe_oracle(h.nu_id);
        if (!nu) throw SchemaError("hnn meta: unknown nu subgroup '" + h.nu_id + "'");
        for (const auto& [y, img] : hj.at("iota").items())
          h.iota[y] = parse_subword_text(img.get<std::string>(), nu->gens(),
                                         "subgroup " + h.nu_id);
      }
      p.meta().hnn = std::move(h);
    }
  }
  for (auto& n : notes) p.meta().provenance.push_back(n);
  return p;
}

}  // namespace

RelativePresentation presentation_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("presentation file is not valid JSON: ") + e.what());
  }
  return presentation_from_json(j);
}

std::string presentation_to_json_text(const RelativePresentation& p) {
  return presentation_to_json(p).dump(2) + "\n";
}

RelativePresentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open presentation file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return presentation_from_json_text(buf.str());
}

void save_presentation(const RelativePresentation& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write presentation file: " + path);
  out << presentation_to_json_text(p);
}

}  // namespace relpres
