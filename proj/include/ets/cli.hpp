#pragma once

// Command implementations behind the `ets` tool. Each command has a
// report-producing function (used by tests) and a printing wrapper that
// returns the process exit code.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ets/cdc.hpp"
#include "ets/construct.hpp"
#include "ets/error.hpp"
#include "ets/graph.hpp"
#include "ets/surface.hpp"

namespace ets::cli {

inline constexpr const char* kVersion = "0.1.0";

using ojson = nlohmann::ordered_json;

struct Options {
  CensusConfig census;
  std::size_t oracle_bound = kDefaultOracleBound;
  unsigned jobs = 1;
};

/// "1,2;1,4" -> {(1,2),(1,4)}.
inline std::set<FeKey> parse_types(const std::string& text) {
  std::set<FeKey> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    unsigned f = 0, s = 0;
    char comma = 0, extra = 0;
    std::stringstream is(item);
    if (!(is >> f >> comma >> s) || comma != ',' || (is >> extra) ||
        !all_fe_types().contains({f, s}))
      throw InputError("--types: '" + item + "' is not one of 1,2 1,4 2,1 2,2");
    out.insert({f, s});
  }
  if (out.empty()) throw InputError("--types: no face-edge types given");
  return out;
}

inline std::string format_types(const std::set<FeKey>& types) {
  std::string out;
  for (const auto& [f, s] : types) {
    if (!out.empty()) out += ';';
    out += std::to_string(f) + "," + std::to_string(s);
  }
  return out;
}

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// ---------------------------------------------------------------------------
// Corpus

struct CorpusEntry {
  std::string id;
  std::string graph6;
};

struct Corpus {
  std::vector<CorpusEntry> entries;
  std::string hash;
};

/// graph6 lines; a "# name" line names the graph that follows it.
inline Corpus parse_corpus(const std::string& text) {
  Corpus c;
  c.hash = "fnv1a64:" + hex64(fnv1a64(text));
  std::stringstream ss(text);
  std::string line;
  std::optional<std::string> name;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto start = line.find_first_not_of("# \t");
      name = start == std::string::npos ? "" : line.substr(start);
      continue;
    }
    std::string id = name && !name->empty() ? *name : "g" + std::to_string(c.entries.size() + 1);
    c.entries.push_back({id, line});
    name.reset();
  }
  return c;
}

// ---------------------------------------------------------------------------
// Serialisation

inline ojson perm_json(const Permutation& p) { return ojson(p.images()); }

inline ojson cycles_json(const CycleSet& cycles) {
  ojson out = ojson::array();
  for (const auto& c : cycles) out.push_back(c.vertices());
  return out;
}

inline ojson record_json(const CensusRecord& r, const std::string& graph6) {
  ojson w;
  w["t"] = r.witness.t;
  w["path"] = r.witness.path;
  w["sigma"] = perm_json(r.witness.sigma);
  w["generators"] = ojson::array();
  for (const auto& g : r.witness.generators) w["generators"].push_back(perm_json(g));
  ojson j;
  j["type"] = "record";
  j["graph"] = r.graph_id;
  j["graph6"] = graph6;
  j["counts"] = {r.vertices, r.edges, r.faces};
  j["euler"] = r.euler;
  j["orientable"] = r.orientable;
  j["fe"] = {r.fe.face_orbits, r.fe.edge_stab_order};
  j["subtype"] = r.fe.subtype ? ojson(*r.fe.subtype) : ojson(nullptr);
  j["aut_order"] = r.aut_order;
  j["cdc"] = cycles_json(r.cdc);
  j["witness"] = std::move(w);
  return j;
}

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::verification: return "verification";
    case ErrorKind::input: return "input";
    case ErrorKind::ceiling: return "ceiling";
    case ErrorKind::internal: return "internal";
  }
  return "internal";
}

// ---------------------------------------------------------------------------
// census

struct GraphResult {
  CorpusEntry entry;
  std::size_t vertices = 0;
  std::uint64_t aut_order = 0;
  std::vector<CensusRecord> records;
  std::optional<ErrorKind> failure;
  std::string message;
};

inline GraphResult census_entry(const CorpusEntry& e, const Options& opt) {
  GraphResult r{e};
  try {
    CubicGraph g = parse_graph6(e.graph6);
    r.vertices = g.vertex_count();
    r.aut_order = automorphism_group(g).order();
    r.records = census_graph(g, e.id, opt.census);
  } catch (const Error& ex) {
    r.failure = ex.kind();
    r.message = ex.what();
  } catch (const std::exception& ex) {
    r.failure = ErrorKind::internal;
    r.message = ex.what();
  }
  return r;
}

/// Per-graph results in corpus order, whatever the number of jobs.
inline std::vector<GraphResult> run_census(const Corpus& corpus, const Options& opt) {
  std::vector<GraphResult> results(corpus.entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < results.size();) results[i] = census_entry(corpus.entries[i], opt);
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(results.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

inline std::string census_jsonl(const Corpus& corpus, const std::vector<GraphResult>& results,
                                const Options& opt) {
  std::ostringstream os;
  ojson header;
  header["type"] = "header";
  header["tool"] = "ets";
  header["version"] = kVersion;
  header["config"] = {{"max_aut_order", opt.census.max_aut_order},
                      {"max_subgroups", opt.census.max_subgroups},
                      {"max_paths", opt.census.max_paths},
                      {"oracle_bound", opt.oracle_bound},
                      {"types", format_types(opt.census.types)}};
  header["corpus_hash"] = corpus.hash;
  header["graphs"] = corpus.entries.size();
  os << header.dump() << '\n';
  for (const auto& r : results) {
    if (r.failure) {
      ojson f;
      f["type"] = "failure";
      f["graph"] = r.entry.id;
      f["graph6"] = r.entry.graph6;
      f["kind"] = kind_name(*r.failure);
      f["message"] = r.message;
      os << f.dump() << '\n';
      continue;
    }
    for (const auto& rec : r.records) os << record_json(rec, r.entry.graph6).dump() << '\n';
  }
  return os.str();
}

inline void census_summary(const std::vector<GraphResult>& results, std::ostream& out) {
  out << std::left << std::setw(18) << "graph" << std::right << std::setw(6) << "|V|"
      << std::setw(10) << "|Aut|" << std::setw(10) << "surfaces" << '\n';
  std::map<FeKey, std::array<std::size_t, 3>> counts;  // total, type 1, type 2
  std::size_t orientable = 0, total = 0;
  for (const auto& r : results) {
    out << std::left << std::setw(18) << r.entry.id << std::right;
    if (r.failure) {
      out << "  FAILED (" << kind_name(*r.failure) << "): " << r.message << '\n';
      continue;
    }
    out << std::setw(6) << r.vertices << std::setw(10) << r.aut_order << std::setw(10)
        << r.records.size() << '\n';
    for (const auto& rec : r.records) {
      auto& c = counts[{rec.fe.face_orbits, rec.fe.edge_stab_order}];
      ++c[0];
      if (rec.fe.subtype) ++c[*rec.fe.subtype];
      orientable += rec.orientable;
      ++total;
    }
  }
  out << '\n'
      << std::left << std::setw(8) << "fe" << std::right << std::setw(8) << "count" << std::setw(8)
      << "type 1" << std::setw(8) << "type 2" << '\n';
  for (FeKey k : {FeKey{1, 4}, FeKey{1, 2}, FeKey{2, 2}, FeKey{2, 1}}) {
    const auto c = counts[k];
    const bool typed = k == FeKey{1, 2};
    out << std::left << std::setw(8) << ("(" + std::to_string(k.first) + "," + std::to_string(k.second) + ")")
        << std::right << std::setw(8) << c[0] << std::setw(8) << (typed ? std::to_string(c[1]) : "x")
        << std::setw(8) << (typed ? std::to_string(c[2]) : "x") << '\n';
  }
  out << std::left << std::setw(8) << "total" << std::right << std::setw(8) << total << '\n'
      << "orientable " << orientable << ", non-orientable " << total - orientable << '\n';
}

/// Exit code of the first failed graph, else 0.
inline int cmd_census(const std::string& corpus_path, const std::optional<std::string>& output_path,
                      const Options& opt, std::ostream& out, std::ostream& err) {
  const Corpus corpus = parse_corpus(read_file(corpus_path));
  const auto results = run_census(corpus, opt);
  const std::string jsonl = census_jsonl(corpus, results, opt);
  if (output_path) {
    std::ofstream f(*output_path, std::ios::binary);
    if (!f) throw InputError("cannot write " + *output_path);
    f << jsonl;
  }
  census_summary(results, out);
  for (const auto& r : results)
    if (r.failure) {
      err << "error: " << r.entry.id << ": " << r.message << '\n';
      return exit_code(*r.failure);
    }
  return 0;
}

// ---------------------------------------------------------------------------
// verify-fixture

struct FixtureReport {
  std::string name;
  std::string source;
  std::size_t vertices = 0, edges = 0, faces = 0;
  std::vector<std::size_t> vertex_degrees;  // distinct, ascending
  long euler = 0;
  bool orientable = false;
  std::optional<std::array<long, 2>> orientation_conflict;
  std::uint64_t aut_order = 0;
  Classification classification;
  std::vector<std::string> violations;
};

inline SimplicialSurface surface_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("surface JSON: ") + ex.what());
  }
  if (!doc.is_object() || !doc.contains("faces") || !doc["faces"].is_array())
    throw InputError("surface JSON: missing \"faces\" array");
  std::vector<std::array<long, 3>> faces;
  for (const auto& f : doc["faces"]) {
    if (!f.is_array() || f.size() != 3 ||
        !std::all_of(f.begin(), f.end(), [](const auto& x) { return x.is_number_integer(); }))
      throw InputError("surface JSON: every face must be a list of 3 integers");
    faces.push_back({f[0].get<long>(), f[1].get<long>(), f[2].get<long>()});
  }
  return load_surface(faces);
}

inline FixtureReport verify_fixture(const std::string& path, const Options& opt) {
  const std::string text = read_file(path);
  SimplicialSurface s = surface_from_json(text);
  const auto doc = nlohmann::json::parse(text);
  FixtureReport r;
  if (doc.contains("metadata") && doc["metadata"].is_object()) {
    r.name = doc["metadata"].value("name", "");
    r.source = doc["metadata"].value("source", "");
  }
  r.vertices = s.vertex_count();
  r.edges = s.edge_count();
  r.faces = s.face_count();
  std::set<std::size_t> degrees;
  for (const auto& u : s.umbrellas()) degrees.insert(u.size());
  r.vertex_degrees.assign(degrees.begin(), degrees.end());
  r.euler = euler_characteristic(s);
  if (auto bad = orientation_conflict(s))
    r.orientation_conflict = std::array<long, 2>{s.label((*bad)[0]), s.label((*bad)[1])};
  r.orientable = !r.orientation_conflict;
  const PermGroup aut_f = automorphism_group(s.face_graph());
  if (aut_f.order() > opt.census.max_aut_order)
    throw CeilingError("|Aut(F(X))| = " + std::to_string(aut_f.order()) +
                       " exceeds --max-aut-order " + std::to_string(opt.census.max_aut_order));
  const PermGroup aut_x = automorphism_group_surface(s, aut_f, opt.census.max_aut_order);
  r.classification = classify(s, aut_x, opt.census.max_aut_order);
  r.aut_order = r.classification.aut_order;
  r.violations = invariant_violations(s, r.classification, aut_f);
  return r;
}

inline void print_fixture(const FixtureReport& r, std::ostream& out) {
  const auto& c = r.classification;
  out << "fixture: " << (r.name.empty() ? "(unnamed)" : r.name);
  if (!r.source.empty()) out << " [" << r.source << "]";
  out << '\n'
      << "counts (|X0|,|X1|,|X2|): (" << r.vertices << "," << r.edges << "," << r.faces << ")\n"
      << "vertex degrees:";
  for (auto d : r.vertex_degrees) out << ' ' << d;
  out << '\n' << "euler characteristic: " << r.euler << '\n' << "orientable: ";
  if (r.orientable)
    out << "yes\n";
  else
    out << "no (conflict at edge {" << (*r.orientation_conflict)[0] << ","
        << (*r.orientation_conflict)[1] << "})\n";
  out << "|Aut(X)|: " << r.aut_order << '\n'
      << "orbits (vertices, edges, faces): (" << c.vertex_orbits << "," << c.edge_orbits << ","
      << c.face_orbits << ")\n"
      << "edge-transitive: " << (c.edge_transitive ? "yes" : "no") << '\n'
      << "fe: " << (c.fe ? c.fe->str() : "undefined") << '\n'
      << "vf: (" << c.vf.vertex_orbits << "," << c.vf.face_stab_order << ")\n";
  if (r.violations.empty()) {
    out << "invariants: PASS\n";
    return;
  }
  out << "invariants: FAIL\n";
  for (const auto& v : r.violations) out << "  violated: " << v << '\n';
}

inline int cmd_verify_fixture(const std::string& path, const Options& opt, std::ostream& out) {
  const auto r = verify_fixture(path, opt);
  print_fixture(r, out);
  return r.violations.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// oracle-check

struct OracleReport {
  std::size_t pipeline = 0;
  std::size_t oracle = 0;
  std::size_t oracle_covers = 0;  // vertex-faithful CDCs before filtering
  bool match = false;
};

namespace detail {

/// Surfaces whose classes under surfaces_isomorphic are pairwise distinct.
inline std::vector<SimplicialSurface> iso_classes(std::vector<SimplicialSurface> all) {
  std::vector<SimplicialSurface> reps;
  for (auto& s : all)
    if (std::none_of(reps.begin(), reps.end(), [&](const SimplicialSurface& r) { return surfaces_isomorphic(r, s); }))
      reps.push_back(std::move(s));
  return reps;
}

/// True iff a and b are equal as sets of isomorphism classes.
inline bool same_classes(const std::vector<SimplicialSurface>& a, const std::vector<SimplicialSurface>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& s : a) {
    bool hit = false;
    for (std::size_t i = 0; i < b.size() && !hit; ++i)
      if (!used[i] && surfaces_isomorphic(s, b[i])) used[i] = hit = true;
    if (!hit) return false;
  }
  return true;
}

}  // namespace detail

/// Pipeline surfaces against the edge-transitive surfaces among all
/// vertex-faithful CDCs of g found by exhaustive search.
inline OracleReport oracle_check(const CubicGraph& g, const Options& opt) {
  if (g.vertex_count() > opt.oracle_bound)
    throw CeilingError("oracle refused: " + std::to_string(g.vertex_count()) +
                       " vertices exceed --oracle-bound " + std::to_string(opt.oracle_bound));
  std::vector<SimplicialSurface> pipeline;
  for (const auto& r : census_graph(g, "oracle", opt.census)) pipeline.push_back(surface_from_cdc(g, r.cdc));

  const PermGroup aut = automorphism_group(g);
  OracleReport report;
  std::vector<SimplicialSurface> found;
  for_each_cdc_bruteforce(
      g,
      [&](const CycleSet& cycles) {
        ++report.oracle_covers;
        SimplicialSurface s = surface_from_cdc(g, cycles);
        Classification c = classify(s, automorphism_group_surface(s, aut, opt.census.max_aut_order),
                                    opt.census.max_aut_order);
        if (c.edge_transitive && opt.census.types.contains({c.fe->face_orbits, c.fe->edge_stab_order}))
          found.push_back(std::move(s));
      },
      opt.oracle_bound);
  auto oracle = detail::iso_classes(std::move(found));
  report.pipeline = pipeline.size();
  report.oracle = oracle.size();
  report.match = detail::same_classes(pipeline, oracle);
  return report;
}

inline int cmd_oracle_check(const std::string& graph6, const Options& opt, std::ostream& out) {
  const CubicGraph g = parse_graph6(graph6);
  const auto r = oracle_check(g, opt);
  out << "graph: " << graph6 << " (" << g.vertex_count() << " vertices)\n"
      << "vertex-faithful CDCs (oracle): " << r.oracle_covers << '\n'
      << "edge-transitive surfaces: pipeline " << r.pipeline << ", oracle " << r.oracle << '\n'
      << (r.match ? "MATCH" : "MISMATCH") << '\n';
  return r.match ? 0 : 1;
}

// ---------------------------------------------------------------------------
// relabel-check

struct RelabelReport {
  Permutation perm;
  std::size_t original = 0;
  std::size_t relabelled = 0;
  bool match = false;
};

/// Uniform permutation of 0..n-1 drawn from a seeded mt19937_64.
inline Permutation random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<Point> images(n);
  std::iota(images.begin(), images.end(), Point{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(images[i - 1], images[pick(rng)]);
  }
  return Permutation(std::move(images));
}

/// "2,0,1" -> permutation with images 2,0,1. Throws InputError unless a bijection.
inline Permutation parse_permutation(const std::string& text) {
  std::vector<Point> images;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      long v = std::stol(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      images.push_back(static_cast<Point>(v));
    } catch (const std::logic_error&) {
      throw InputError("--perm: '" + item + "' is not a non-negative integer");
    }
  }
  return Permutation(std::move(images));
}

inline RelabelReport relabel_check(const CubicGraph& g, const Permutation& p, const Options& opt) {
  if (p.images().size() != g.vertex_count())
    throw InputError("relabelling has degree " + std::to_string(p.images().size()) + " but the graph has " +
                     std::to_string(g.vertex_count()) + " vertices");
  const CubicGraph h = relabel(g, p);
  auto surfaces = [&](const CubicGraph& x) {
    std::vector<SimplicialSurface> out;
    for (const auto& r : census_graph(x, "relabel", opt.census)) out.push_back(surface_from_cdc(x, r.cdc));
    return out;
  };
  const auto a = surfaces(g);
  const auto b = surfaces(h);
  return RelabelReport{p, a.size(), b.size(), detail::same_classes(a, b)};
}

inline int cmd_relabel_check(const std::string& graph6, const Permutation& p, const Options& opt,
                             std::ostream& out) {
  const CubicGraph g = parse_graph6(graph6);
  const auto r = relabel_check(g, p, opt);
  out << "graph: " << graph6 << " (" << g.vertex_count() << " vertices)\n"
      << "relabelled graph: " << write_graph6(relabel(g, p)) << '\n'
      << "surfaces: original " << r.original << ", relabelled " << r.relabelled << '\n'
      << (r.match ? "MATCH" : "MISMATCH") << '\n';
  return r.match ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Entry point

/// Parses argv and runs one command; returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Construct, classify and verify edge-transitive triangulated surfaces."};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  Options opt;
  std::string types = format_types(all_fe_types());
  app.add_option("--max-aut-order", opt.census.max_aut_order,
                 "Refuse automorphism groups larger than this")
      ->envname("ETS_MAX_AUT_ORDER")
      ->capture_default_str();
  app.add_option("--oracle-bound", opt.oracle_bound, "Largest graph the brute-force oracle accepts")
      ->envname("ETS_ORACLE_BOUND")
      ->capture_default_str();
  app.add_option("--types", types, "Face-edge types to report, e.g. \"1,2;1,4;2,1;2,2\"")
      ->envname("ETS_TYPES")
      ->capture_default_str();
  app.add_option("--jobs", opt.jobs, "Graphs processed in parallel")
      ->envname("ETS_JOBS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string corpus_path;
  std::optional<std::string> output_path;
  auto* census = app.add_subcommand("census", "Census every graph of a graph6 corpus");
  census->add_option("corpus", corpus_path, "graph6 corpus file")->required();
  census->add_option("-o,--output", output_path, "Write the JSON Lines census here");

  std::string fixture_path;
  auto* verify = app.add_subcommand("verify-fixture", "Load a surface JSON and check every invariant");
  verify->add_option("surface", fixture_path, "Surface JSON file")->required();

  std::string graph6;
  auto* oracle = app.add_subcommand("oracle-check", "Compare the pipeline with exhaustive CDC search");
  oracle->add_option("graph6", graph6, "Graph in graph6 format")->required();

  std::uint64_t seed = 0;
  std::optional<std::string> perm_text;
  auto* relabel_cmd = app.add_subcommand("relabel-check", "Compare the census of a graph and a relabelled copy");
  relabel_cmd->add_option("graph6", graph6, "Graph in graph6 format")->required();
  relabel_cmd->add_option("--seed", seed, "Seed of the random relabelling")->capture_default_str();
  relabel_cmd->add_option("--perm", perm_text, "Explicit relabelling as comma-separated images");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    opt.census.types = parse_types(types);
    if (*census) return cmd_census(corpus_path, output_path, opt, out, err);
    if (*verify) return cmd_verify_fixture(fixture_path, opt, out);
    if (*oracle) return cmd_oracle_check(graph6, opt, out);
    const CubicGraph g = parse_graph6(graph6);
    const Permutation p = perm_text ? parse_permutation(*perm_text) : random_permutation(g.vertex_count(), seed);
    return cmd_relabel_check(graph6, p, opt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return exit_code(ErrorKind::internal);
  }
}

}  // namespace ets::cli
