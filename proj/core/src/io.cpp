#include "etale/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace etale {
namespace {

constexpr std::size_t kInlineOpens = 256;

[[noreturn]] void schema(const std::string& path, const std::string& message) {
  throw Error(ErrorKind::SchemaError, path + ": " + message, {{"path", path}});
}

const nlohmann::json& field(const nlohmann::json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema(path, "object expected");
  const auto it = j.find(key);
  if (it == j.end()) schema(path, "missing field '" + key + "'");
  return *it;
}

const nlohmann::json& object_field(const nlohmann::json& j, const std::string& key, const std::string& path) {
  const auto& f = field(j, key, path);
  if (!f.is_object()) schema(path + "." + key, "object expected");
  return f;
}

std::string as_string(const nlohmann::json& j, const std::string& path) {
  if (!j.is_string()) schema(path, "string expected");
  return j.get<std::string>();
}

int as_int(const nlohmann::json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_string()) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(j.get<std::string>(), &used);
      if (used == j.get<std::string>().size()) return v;
    } catch (const std::exception&) {
    }
  }
  schema(path, "integer expected");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::stringstream in(s);
  while (std::getline(in, part, sep)) out.push_back(part);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  if (s.empty()) out.emplace_back();
  return out;
}

OpenId open_from_key(const FiniteSpace& space, const std::string& key, const std::string& path) {
  PointSet s;
  try {
    s = space.from_key(key);
  } catch (const Error&) {
    schema(path, "malformed open key '" + key + "'");
  }
  if (!space.is_open(s)) schema(path, "'" + key + "' is not open");
  return space.open_id(s);
}

std::vector<OpenId> open_path(const FiniteSpace& space, const std::string& key, std::size_t parts,
                              const std::string& path) {
  const auto keys = split(key, '/');
  if (keys.size() != parts) schema(path, "key '" + key + "' needs " + std::to_string(parts) + " opens");
  std::vector<OpenId> out;
  for (const auto& k : keys) out.push_back(open_from_key(space, k, path));
  return out;
}

std::size_t index_in(const std::vector<std::string>& ids, const std::string& id, const std::string& path) {
  const auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) schema(path, "unknown identifier '" + id + "'");
  return static_cast<std::size_t>(it - ids.begin());
}

std::size_t point_index(const FiniteSpace& space, const nlohmann::json& j, const std::string& path) {
  const int label = as_int(j, path);
  try {
    return space.index_of(label);
  } catch (const Error&) {
    schema(path, "unknown point " + std::to_string(label));
  }
}

std::size_t point_from_key(const FiniteSpace& space, const std::string& key, const std::string& path) {
  return point_index(space, nlohmann::json(key), path);
}

std::string dot_id(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

nlohmann::json space_to_json(const FiniteSpace& space) {
  std::vector<int> points = space.labels();
  std::sort(points.begin(), points.end());
  nlohmann::json out{{"points", points}};
  if (space.has_open_lattice() && space.open_count() <= kInlineOpens) {
    std::vector<std::vector<int>> opens;
    for (const auto& u : space.opens()) {
      auto labels = space.to_labels(u);
      std::sort(labels.begin(), labels.end());
      opens.push_back(labels);
    }
    std::sort(opens.begin(), opens.end());
    out["opens"] = opens;
  } else {
    nlohmann::json minimal = nlohmann::json::object();
    for (std::size_t x = 0; x < space.size(); ++x) {
      auto labels = space.to_labels(space.minimal_open(x));
      std::sort(labels.begin(), labels.end());
      minimal[std::to_string(space.label(x))] = labels;
    }
    out["minimal_opens"] = minimal;
  }
  return out;
}

FiniteSpace space_from_json(const nlohmann::json& j) {
  const auto& pts = field(j, "points", "space");
  if (!pts.is_array()) schema("space.points", "array expected");
  std::vector<int> points;
  for (std::size_t i = 0; i < pts.size(); ++i) points.push_back(as_int(pts[i], "space.points[" + std::to_string(i) + "]"));
  if (j.contains("opens")) {
    const auto& ops = j["opens"];
    if (!ops.is_array()) schema("space.opens", "array expected");
    std::vector<std::vector<int>> opens;
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const std::string path = "space.opens[" + std::to_string(k) + "]";
      if (!ops[k].is_array()) schema(path, "array expected");
      std::vector<int> open;
      for (std::size_t i = 0; i < ops[k].size(); ++i) open.push_back(as_int(ops[k][i], path));
      opens.push_back(open);
    }
    return FiniteSpace::build(points, opens);
  }
  const auto& minimal = object_field(j, "minimal_opens", "space");
  std::sort(points.begin(), points.end());
  if (std::adjacent_find(points.begin(), points.end()) != points.end())
    schema("space.points", "duplicate point identifier");
  auto index = [&](int label, const std::string& path) {
    const auto it = std::lower_bound(points.begin(), points.end(), label);
    if (it == points.end() || *it != label) schema(path, "unknown point " + std::to_string(label));
    return static_cast<std::size_t>(it - points.begin());
  };
  std::vector<PointSet> sets(points.size());
  std::vector<bool> seen(points.size(), false);
  for (const auto& [key, value] : minimal.items()) {
    const std::string path = "space.minimal_opens." + key;
    const std::size_t x = index(as_int(nlohmann::json(key), path), path);
    if (!value.is_array()) schema(path, "array expected");
    for (const auto& p : value) sets[x].insert(index(as_int(p, path), path));
    seen[x] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) schema("space.minimal_opens", "a point has no entry");
  return FiniteSpace::from_minimal_opens(points, std::move(sets));
}

nlohmann::json presheaf_to_json(const Presheaf& p) {
  const auto& space = p.space();
  nlohmann::json sections = nlohmann::json::object();
  nlohmann::json restrictions = nlohmann::json::object();
  for (OpenId u = 0; u < p.open_count(); ++u) {
    sections[space.key(space.open(u))] = p.sections(u);
    for (OpenId v = 0; v < p.open_count(); ++v) {
      if (v == u || !space.open(v).subset_of(space.open(u))) continue;
      nlohmann::json map = nlohmann::json::object();
      for (SectionId s = 0; s < p.section_count(u); ++s) map[p.sections(u)[s]] = p.sections(v)[p.restrict(u, v, s)];
      restrictions[space.key(space.open(u)) + "/" + space.key(space.open(v))] = map;
    }
  }
  return {{"space", space_to_json(space)}, {"sections", sections}, {"restrictions", restrictions}};
}

Presheaf presheaf_from_json(const nlohmann::json& j) {
  const auto space = share(space_from_json(field(j, "space", "presheaf")));
  const std::size_t n = space->open_count();
  std::vector<std::vector<std::string>> sections(n);
  std::vector<bool> given(n, false);
  for (const auto& [key, ids] : object_field(j, "sections", "presheaf").items()) {
    const std::string path = "presheaf.sections." + key;
    const OpenId u = open_from_key(*space, key, path);
    if (!ids.is_array()) schema(path, "array expected");
    for (const auto& id : ids) sections[u].push_back(as_string(id, path));
    auto sorted = sections[u];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) schema(path, "duplicate section identifier");
    given[u] = true;
  }
  for (OpenId u = 0; u < n; ++u)
    if (!given[u]) schema("presheaf.sections", "no entry for open '" + space->key(space->open(u)) + "'");

  std::vector<std::vector<SectionId>> restrictions(n * n);
  for (OpenId u = 0; u < n; ++u) {
    restrictions[u * n + u].resize(sections[u].size());
    for (SectionId s = 0; s < sections[u].size(); ++s) restrictions[u * n + u][s] = s;
  }
  std::vector<bool> seen(n * n, false);
  for (const auto& [key, map] : object_field(j, "restrictions", "presheaf").items()) {
    const std::string path = "presheaf.restrictions." + key;
    const auto uv = open_path(*space, key, 2, path);
    if (!space->open(uv[1]).subset_of(space->open(uv[0]))) schema(path, "target open is not inside the source");
    if (!map.is_object()) schema(path, "object expected");
    auto& row = restrictions[uv[0] * n + uv[1]];
    row.assign(sections[uv[0]].size(), 0);
    std::vector<bool> mapped(row.size(), false);
    for (const auto& [from, to] : map.items()) {
      const std::size_t s = index_in(sections[uv[0]], from, path);
      row[s] = index_in(sections[uv[1]], as_string(to, path), path);
      mapped[s] = true;
    }
    if (std::find(mapped.begin(), mapped.end(), false) != mapped.end()) schema(path, "restriction is not total");
    seen[uv[0] * n + uv[1]] = true;
  }
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v)
      if (u != v && space->open(v).subset_of(space->open(u)) && !seen[u * n + v])
        schema("presheaf.restrictions",
               "missing '" + space->key(space->open(u)) + "/" + space->key(space->open(v)) + "'");
  return Presheaf(space, std::move(sections), std::move(restrictions));
}

nlohmann::json pseudogroup_to_json(const PrePseudogroup& c, std::optional<Dialect> dialect) {
  const auto& space = c.space();
  const std::size_t n = c.open_count();
  auto key = [&](OpenId u) { return space.key(space.open(u)); };
  nlohmann::json homs = nlohmann::json::object(), compose = nlohmann::json::object(), incl = nlohmann::json::object();
  nlohmann::json underlying = nlohmann::json::object();
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v) {
      if (c.hom_size(u, v) == 0) continue;
      const std::string uv = key(u) + "/" + key(v);
      homs[uv] = c.homs(u, v);
      if (const auto inc = c.incl(u, v)) incl[uv] = c.homs(u, v)[*inc];
      if (c.has_underlying()) {
        nlohmann::json maps = nlohmann::json::object();
        for (HomId f = 0; f < c.hom_size(u, v); ++f) {
          const auto map = c.stored_underlying(u, v, f);
          nlohmann::json values = nlohmann::json::object();
          space.open(u).for_each([&](std::size_t x) { values[std::to_string(space.label(x))] = space.label(map(x)); });
          maps[c.homs(u, v)[f]] = values;
        }
        underlying[uv] = maps;
      }
      for (OpenId w = 0; w < n; ++w) {
        if (c.hom_size(v, w) == 0) continue;
        nlohmann::json table = nlohmann::json::object();
        for (HomId g = 0; g < c.hom_size(v, w); ++g)
          for (HomId f = 0; f < c.hom_size(u, v); ++f)
            table[c.homs(v, w)[g] + "," + c.homs(u, v)[f]] = c.homs(u, w)[c.compose(u, v, w, g, f)];
        compose[uv + "/" + key(w)] = table;
      }
    }
  nlohmann::json out{{"space", space_to_json(space)}, {"homs", homs}, {"compose", compose}, {"incl", incl}};
  if (c.has_underlying()) out["underlying"] = underlying;
  if (dialect) out["dialect"] = std::string(to_string(*dialect));
  return out;
}

PrePseudogroup pseudogroup_from_json(const nlohmann::json& j) {
  const auto space = share(space_from_json(field(j, "space", "pseudogroup")));
  const std::size_t n = space->open_count();
  PrePseudogroupData d;
  d.space = space;
  d.homs.resize(n * n);
  d.incl.resize(n * n);
  d.compose.resize(n * n * n);
  for (const auto& [key, ids] : object_field(j, "homs", "pseudogroup").items()) {
    const std::string path = "pseudogroup.homs." + key;
    const auto uv = open_path(*space, key, 2, path);
    if (!ids.is_array()) schema(path, "array expected");
    auto& homs = d.homs[uv[0] * n + uv[1]];
    for (const auto& id : ids) {
      const auto s = as_string(id, path);
      if (s.find(',') != std::string::npos || s.find('/') != std::string::npos)
        schema(path, "identifier '" + s + "' contains ',' or '/'");
      if (std::find(homs.begin(), homs.end(), s) != homs.end()) schema(path, "duplicate identifier '" + s + "'");
      homs.push_back(s);
    }
  }
  for (const auto& [key, id] : object_field(j, "incl", "pseudogroup").items()) {
    const std::string path = "pseudogroup.incl." + key;
    const auto uv = open_path(*space, key, 2, path);
    d.incl[uv[0] * n + uv[1]] = static_cast<HomId>(index_in(d.homs[uv[0] * n + uv[1]], as_string(id, path), path));
  }
  const auto& compose = object_field(j, "compose", "pseudogroup");
  for (OpenId u = 0; u < n; ++u)
    for (OpenId v = 0; v < n; ++v)
      for (OpenId w = 0; w < n; ++w) {
        const auto& fs = d.homs[u * n + v];
        const auto& gs = d.homs[v * n + w];
        if (fs.empty() || gs.empty()) continue;
        const std::string key = space->key(space->open(u)) + "/" + space->key(space->open(v)) + "/" +
                                space->key(space->open(w));
        const std::string path = "pseudogroup.compose." + key;
        const auto it = compose.find(key);
        if (it == compose.end() || !it->is_object()) schema(path, "composition table missing");
        auto& table = d.compose[(u * n + v) * n + w];
        table.assign(gs.size() * fs.size(), 0);
        std::vector<bool> filled(table.size(), false);
        for (const auto& [pair, h] : it->items()) {
          const auto gf = split(pair, ',');
          if (gf.size() != 2) schema(path, "key '" + pair + "' is not 'g,f'");
          const std::size_t g = index_in(gs, gf[0], path), f = index_in(fs, gf[1], path);
          table[g * fs.size() + f] = static_cast<HomId>(index_in(d.homs[u * n + w], as_string(h, path), path));
          filled[g * fs.size() + f] = true;
        }
        if (std::find(filled.begin(), filled.end(), false) != filled.end()) schema(path, "composition table not total");
      }
  if (j.contains("underlying")) {
    const auto& und = object_field(j, "underlying", "pseudogroup");
    std::vector<std::vector<std::vector<std::size_t>>> maps(n * n);
    for (OpenId u = 0; u < n; ++u)
      for (OpenId v = 0; v < n; ++v) {
        const auto& homs = d.homs[u * n + v];
        if (homs.empty()) continue;
        const std::string key = space->key(space->open(u)) + "/" + space->key(space->open(v));
        const std::string path = "pseudogroup.underlying." + key;
        const auto it = und.find(key);
        if (it == und.end() || !it->is_object()) schema(path, "underlying maps missing");
        for (const auto& id : homs) {
          const auto m = it->find(id);
          if (m == it->end() || !m->is_object()) schema(path, "no map for '" + id + "'");
          std::vector<std::size_t> values;
          space->open(u).for_each([&](std::size_t x) {
            const auto value = m->find(std::to_string(space->label(x)));
            if (value == m->end()) schema(path + "." + id, "map is not total");
            values.push_back(point_index(*space, *value, path + "." + id));
          });
          maps[u * n + v].push_back(values);
        }
      }
    d.underlying = std::move(maps);
  }
  return PrePseudogroup(std::move(d));
}

nlohmann::json groupoid_to_json(const TopGroupoid& g) {
  const auto& base = *g.base;
  const auto& arrows = *g.arrows;
  auto arrow = [&](std::size_t a) { return arrows.label(a); };
  auto akey = [&](std::size_t a) { return std::to_string(arrows.label(a)); };
  nlohmann::json s = nlohmann::json::object(), t = nlohmann::json::object(), i = nlohmann::json::object(),
                 inv = nlohmann::json::object(), comp = nlohmann::json::object();
  for (std::size_t a = 0; a < g.arrow_count(); ++a) {
    s[akey(a)] = base.label(g.source[a]);
    t[akey(a)] = base.label(g.target[a]);
    inv[akey(a)] = arrow(g.inverse[a]);
  }
  for (std::size_t x = 0; x < g.base_size(); ++x) i[std::to_string(base.label(x))] = arrow(g.unit[x]);
  for (std::size_t a = 0; a < g.arrow_count(); ++a)
    for (std::size_t b = 0; b < g.arrow_count(); ++b)
      if (const auto c = g.compose(a, b)) comp[akey(a) + "," + akey(b)] = arrow(*c);
  nlohmann::json out{{"base", space_to_json(base)}, {"arrows", space_to_json(arrows)}, {"s", s}, {"t", t},
                     {"i", i}, {"inv", inv}, {"comp", comp}};
  if (!g.names.empty()) {
    nlohmann::json names = nlohmann::json::object();
    for (std::size_t a = 0; a < g.arrow_count(); ++a) names[akey(a)] = g.names[a];
    out["names"] = names;
  }
  return out;
}

TopGroupoid groupoid_from_json(const nlohmann::json& j) {
  TopGroupoid g;
  g.base = share(space_from_json(field(j, "base", "groupoid")));
  g.arrows = share(space_from_json(field(j, "arrows", "groupoid")));
  const std::size_t nb = g.base_size(), na = g.arrow_count();
  auto per_arrow = [&](const std::string& name, const FiniteSpace& values) {
    const auto& obj = object_field(j, name, "groupoid");
    std::vector<std::size_t> out(na);
    std::vector<bool> seen(na, false);
    for (const auto& [key, value] : obj.items()) {
      const std::string path = "groupoid." + name + "." + key;
      const std::size_t a = point_from_key(*g.arrows, key, path);
      out[a] = point_index(values, value, path);
      seen[a] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) schema("groupoid." + name, "not defined on every arrow");
    return out;
  };
  g.source = per_arrow("s", *g.base);
  g.target = per_arrow("t", *g.base);
  g.inverse = per_arrow("inv", *g.arrows);
  g.unit.assign(nb, 0);
  std::vector<bool> seen(nb, false);
  for (const auto& [key, value] : object_field(j, "i", "groupoid").items()) {
    const std::string path = "groupoid.i." + key;
    const std::size_t x = point_from_key(*g.base, key, path);
    g.unit[x] = point_index(*g.arrows, value, path);
    seen[x] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) schema("groupoid.i", "not defined on every point");
  g.comp.assign(na * na, std::nullopt);
  for (const auto& [key, value] : object_field(j, "comp", "groupoid").items()) {
    const std::string path = "groupoid.comp." + key;
    const auto gf = split(key, ',');
    if (gf.size() != 2) schema(path, "key is not 'g,f'");
    const std::size_t a = point_from_key(*g.arrows, gf[0], path), b = point_from_key(*g.arrows, gf[1], path);
    g.comp[a * na + b] = point_index(*g.arrows, value, path);
  }
  if (j.contains("names")) {
    g.names.assign(na, "");
    for (const auto& [key, value] : object_field(j, "names", "groupoid").items())
      g.names[point_from_key(*g.arrows, key, "groupoid.names." + key)] = as_string(value, "groupoid.names." + key);
  }
  return g;
}

std::string_view to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::Space: return "space";
    case InstanceKind::Presheaf: return "presheaf";
    case InstanceKind::Pseudogroup: return "pseudogroup";
    case InstanceKind::Groupoid: return "groupoid";
  }
  return "unknown";
}

Instance parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what(), {{"byte", e.byte}});
  }
  Instance out;
  if (!j.is_object()) schema("$", "object expected");
  if (j.contains("homs")) {
    out.kind = InstanceKind::Pseudogroup;
    out.pseudogroup = pseudogroup_from_json(j);
    out.space = out.pseudogroup.space_ptr();
    if (j.contains("dialect")) {
      const auto d = as_string(j["dialect"], "pseudogroup.dialect");
      if (d == to_string(Dialect::T1)) out.dialect = Dialect::T1;
      else if (d == to_string(Dialect::NonT1)) out.dialect = Dialect::NonT1;
      else schema("pseudogroup.dialect", "unknown dialect '" + d + "'");
    }
  } else if (j.contains("sections")) {
    out.kind = InstanceKind::Presheaf;
    out.presheaf = presheaf_from_json(j);
    out.space = out.presheaf.space_ptr();
  } else if (j.contains("base")) {
    out.kind = InstanceKind::Groupoid;
    out.groupoid = groupoid_from_json(j);
    out.space = out.groupoid.base;
  } else if (j.contains("points")) {
    out.kind = InstanceKind::Space;
    out.space = share(space_from_json(j));
  } else {
    schema("$", "cannot tell the instance kind from its fields");
  }
  return out;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'", {{"path", path}});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

std::string space_dot(const FiniteSpace& space) {
  std::ostringstream out;
  out << "digraph space {\n  rankdir=BT;\n";
  for (std::size_t x = 0; x < space.size(); ++x) out << "  " << space.label(x) << ";\n";
  for (std::size_t x = 0; x < space.size(); ++x)
    for (std::size_t y = 0; y < space.size(); ++y) {
      if (x == y || !space.specializes(x, y) || space.specializes(y, x)) continue;
      bool covering = true;
      for (std::size_t z = 0; z < space.size() && covering; ++z)
        if (z != x && z != y && space.specializes(x, z) && space.specializes(z, y) && !space.specializes(z, x) &&
            !space.specializes(y, z))
          covering = false;
      if (covering) out << "  " << space.label(x) << " -> " << space.label(y) << ";\n";
    }
  // Points in one minimal open of each other are topologically indistinguishable.
  for (std::size_t x = 0; x < space.size(); ++x)
    for (std::size_t y = x + 1; y < space.size(); ++y)
      if (space.specializes(x, y) && space.specializes(y, x))
        out << "  " << space.label(x) << " -> " << space.label(y) << " [dir=both, style=dashed];\n";
  out << "}\n";
  return out.str();
}

std::string etale_dot(const Presheaf& p) {
  const auto& space = p.space();
  const auto bundle = etale_space(p);
  std::ostringstream out;
  out << "digraph etale {\n  compound=true;\n";
  auto node = [&](std::size_t i) {
    const auto& g = bundle.germs[i];
    return dot_id("germ " + stalk(p, g.point)[g.value] + " @ " + std::to_string(space.label(g.point)));
  };
  for (std::size_t x = 0; x < space.size(); ++x)
    out << "  " << dot_id("point " + std::to_string(space.label(x))) << " [shape=box];\n";
  std::vector<PointSet> seen;
  std::size_t cluster = 0;
  for (OpenId u = 0; u < p.open_count(); ++u)
    for (SectionId f = 0; f < p.section_count(u); ++f) {
      const auto basic = basic_open(p, bundle, u, f);
      if (basic.empty() || std::find(seen.begin(), seen.end(), basic) != seen.end()) continue;
      seen.push_back(basic);
      out << "  subgraph cluster_" << cluster++ << " {\n    label=" << dot_id(p.sections(u)[f] + " on {" +
                                                                              space.key(space.open(u)) + "}")
          << ";\n";
      basic.for_each([&](std::size_t i) { out << "    " << node(i) << ";\n"; });
      out << "  }\n";
    }
  for (std::size_t i = 0; i < bundle.germs.size(); ++i)
    out << "  " << node(i) << " -> " << dot_id("point " + std::to_string(space.label(bundle.germs[i].point)))
        << " [style=dotted];\n";
  out << "}\n";
  return out.str();
}

std::string groupoid_dot(const TopGroupoid& g) {
  std::ostringstream out;
  out << "digraph groupoid {\n";
  for (std::size_t x = 0; x < g.base_size(); ++x) out << "  " << g.base->label(x) << " [shape=box];\n";
  for (std::size_t a = 0; a < g.arrow_count(); ++a)
    out << "  " << g.base->label(g.source[a]) << " -> " << g.base->label(g.target[a]) << " [label=" << dot_id(g.name(a))
        << "];\n";
  out << "}\n";
  return out.str();
}

}  // namespace etale
