// Command-line front end: compatibility checking and supertree construction
// through the display graph, plus diagnostics (treewidth test, face census,
// DOT export), instance generators, and brute-force oracles.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "sptw/families.hpp"
#include "sptw/newick.hpp"
#include "sptw/oracle.hpp"
#include "sptw/supertree.hpp"

namespace {

using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr int kExitCompatible = 0;
constexpr int kExitIncompatible = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Input {
  std::vector<std::string> files;
  bool per_file = false;
};

struct Batch {
  std::string name;
  std::vector<sptw::PhyloTree> trees;
};

std::vector<Batch> load(const Input& in, sptw::TaxonTable& taxa) {
  std::vector<Batch> batches;
  auto read_one = [&](const std::string& path) {
    if (path == "-") return sptw::read_newick_lines(std::cin, taxa);
    return sptw::read_newick_file(path, taxa);
  };
  if (in.files.empty()) {
    batches.push_back({"-", sptw::read_newick_lines(std::cin, taxa)});
  } else if (in.per_file) {
    for (const auto& f : in.files) batches.push_back({f, read_one(f)});
  } else {
    Batch all{in.files.size() == 1 ? in.files[0] : "<concatenated>", {}};
    for (const auto& f : in.files) {
      auto trees = read_one(f);
      all.trees.insert(all.trees.end(), trees.begin(), trees.end());
    }
    batches.push_back(std::move(all));
  }
  for (const auto& b : batches)
    if (b.trees.empty()) throw sptw::ParseError(b.name + ": no trees in input", 0);
  return batches;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

struct RunReport {
  std::string verdict;
  std::optional<std::string> supertree;
  bool tw2 = false;
  std::optional<std::vector<std::vector<std::string>>> k4_witness;
  std::vector<sptw::CaseRecord> case_trace;
  double parse_ms = 0, solve_ms = 0, total_ms = 0;

  ordered_json to_json() const {
    ordered_json j;
    j["verdict"] = verdict;
    j["supertree"] = supertree ? ordered_json(*supertree) : ordered_json(nullptr);
    j["tw2"] = tw2;
    if (k4_witness)
      j["k4_witness"] = *k4_witness;
    else
      j["k4_witness"] = nullptr;
    j["case_trace"] = ordered_json::array();
    for (const auto& c : case_trace) {
      ordered_json rec;
      rec["depth"] = c.depth;
      rec["case"] = sptw::to_string(c.label);
      rec["u"] = c.u_desc;
      rec["v"] = c.v_desc;
      rec["t"] = c.t_desc.empty() ? ordered_json(nullptr) : ordered_json(c.t_desc);
      j["case_trace"].push_back(rec);
    }
    j["timings"]["parse_ms"] = parse_ms;
    j["timings"]["solve_ms"] = solve_ms;
    j["timings"]["total_ms"] = total_ms;
    return j;
  }

  void print_text(std::ostream& out) const {
    out << "verdict: " << verdict << "\n";
    out << "tw2: " << (tw2 ? "true" : "false") << "\n";
    if (supertree) out << "supertree: " << *supertree << "\n";
    if (k4_witness) {
      out << "k4_witness:";
      for (const auto& set : *k4_witness) {
        out << " {";
        for (std::size_t i = 0; i < set.size(); ++i) out << (i ? "," : "") << set[i];
        out << "}";
      }
      out << "\n";
    }
    for (const auto& c : case_trace) {
      out << "case: depth=" << c.depth << " kind=" << sptw::to_string(c.label)
          << " u=" << c.u_desc << " v=" << c.v_desc;
      if (!c.t_desc.empty()) out << " t=" << c.t_desc;
      out << "\n";
    }
    out << "timings: parse_ms=" << parse_ms << " solve_ms=" << solve_ms
        << " total_ms=" << total_ms << "\n";
  }
};

std::vector<std::vector<std::string>> witness_sets(const sptw::WitnessReport& report) {
  std::vector<std::vector<std::string>> out;
  for (const auto& set : report.branch_sets) out.push_back(set);
  return out;
}

int run_check(const Input& in, bool json, bool use_oracle, bool emit_tree_only,
              const std::string& out_path) {
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  sptw::TaxonTable taxa;
  auto t_start = Clock::now();
  auto batches = load(in, taxa);
  double parse_ms = ms_since(t_start);

  int worst = kExitCompatible;
  for (const auto& batch : batches) {
    RunReport report;
    report.parse_ms = parse_ms;
    auto t_solve = Clock::now();
    sptw::SupertreeResult result = sptw::supertree_tw2(batch.trees, taxa);
    int code = kExitCompatible;
    switch (result.outcome) {
      case sptw::SupertreeResult::Outcome::Supertree:
        report.verdict = "compatible";
        report.tw2 = true;
        report.supertree = sptw::write_newick(*result.supertree, taxa);
        report.case_trace = result.case_trace;
        break;
      case sptw::SupertreeResult::Outcome::NotApplicable: {
        report.tw2 = false;
        report.k4_witness = witness_sets(*result.witness_report);
        bool resolved = false;
        if (use_oracle) {
          std::set<sptw::TaxonId> all;
          for (const auto& t : batch.trees) all.insert(t.taxa().begin(), t.taxa().end());
          if (all.size() <= 9) {
            auto s = sptw::brute_force_compatible(batch.trees);
            resolved = true;
            if (s) {
              report.verdict = "compatible";
              report.supertree = sptw::write_newick(*s, taxa);
              code = kExitCompatible;
            } else {
              report.verdict = "incompatible";
              code = kExitIncompatible;
            }
          }
        }
        if (!resolved) {
          report.verdict = "not_applicable";
          code = kExitUnknown;
        }
        break;
      }
      case sptw::SupertreeResult::Outcome::Incompatible:
        report.verdict = "incompatible";
        code = kExitIncompatible;
        break;
    }
    report.solve_ms = ms_since(t_solve);
    report.total_ms = ms_since(t_start);
    if (emit_tree_only) {
      if (report.supertree)
        out << *report.supertree << "\n";
      else
        std::cerr << batch.name << ": " << report.verdict << "\n";
    } else if (json) {
      ordered_json j = report.to_json();
      if (in.per_file) j["input"] = batch.name;
      out << j.dump(2) << "\n";
    } else {
      if (in.per_file) out << "input: " << batch.name << "\n";
      report.print_text(out);
    }
    worst = std::max(worst, code);
  }
  return worst;
}

int run_tw(const Input& in, bool json, const std::string& out_path) {
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  sptw::TaxonTable taxa;
  auto batches = load(in, taxa);
  int worst = kExitCompatible;
  for (const auto& batch : batches) {
    sptw::DisplayGraph d = sptw::build_display(batch.trees);
    auto [cleaned, trace] = sptw::cleanup(d);
    sptw::SimpleGraph g = sptw::graph_of(cleaned);
    auto [ok, rtrace] = sptw::is_tw_le_2(g);
    std::optional<sptw::K4Witness> witness;
    if (!ok) witness = sptw::k4_witness(g);
    if (json) {
      ordered_json j;
      j["tw2"] = ok;
      j["vertices"] = d.vertex_count();
      j["edges"] = d.edge_count();
      j["cleaned_vertices"] = cleaned.vertex_count();
      j["cleaned_edges"] = cleaned.edge_count();
      if (witness) {
        std::vector<std::vector<std::string>> sets;
        for (const auto& bs : witness->branch_sets) {
          std::vector<std::string> set;
          for (int v : bs) {
            set.push_back(cleaned.is_taxon(v) ? taxa.label(cleaned.verts[v].taxon)
                                              : "T" + std::to_string(cleaned.verts[v].tree) +
                                                    ".v" + std::to_string(v));
          }
          sets.push_back(std::move(set));
        }
        j["k4_witness"] = sets;
      } else {
        j["k4_witness"] = nullptr;
      }
      out << j.dump(2) << "\n";
    } else {
      out << "tw<=2: " << (ok ? "true" : "false") << "\n";
      out << "k4_witness:";
      if (witness) {
        for (const auto& bs : witness->branch_sets) {
          out << " {";
          for (std::size_t i = 0; i < bs.size(); ++i) {
            int v = bs[i];
            out << (i ? "," : "")
                << (cleaned.is_taxon(v)
                        ? taxa.label(cleaned.verts[v].taxon)
                        : "T" + std::to_string(cleaned.verts[v].tree) + ".v" + std::to_string(v));
          }
          out << "}";
        }
      }
      out << "\n";
    }
    worst = std::max(worst, ok ? kExitCompatible : kExitUnknown);
  }
  return worst;
}

int run_faces(const Input& in, const std::string& out_path) {
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  sptw::TaxonTable taxa;
  auto batches = load(in, taxa);
  const auto& batch = batches.front();
  sptw::DisplayGraph d = sptw::build_display(batch.trees);
  auto desc = [&](const sptw::DisplayGraph& g, int v) {
    return g.is_taxon(v) ? taxa.label(g.verts[v].taxon)
                         : "T" + std::to_string(g.verts[v].tree) + ".v" + std::to_string(v);
  };
  int code = kExitCompatible;
  auto comps = sptw::components(d);
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const auto& comp = comps[ci];
    sptw::SimpleGraph g = sptw::graph_of(comp);
    auto [ok, trace] = sptw::is_tw_le_2(g);
    out << "component " << ci << ": vertices=" << comp.vertex_count()
        << " edges=" << comp.edge_count() << " tw<=2=" << (ok ? "true" : "false") << "\n";
    if (!ok) {
      code = std::max(code, kExitUnknown);
      continue;
    }
    sptw::RotationSystem rot = sptw::embed(g, trace);
    auto fs = sptw::faces(rot);
    auto labeling = sptw::face_labels(rot, fs);
    out << "faces: " << fs.size() << "\n";
    for (std::size_t f = 0; f < fs.size(); ++f) {
      out << "face " << f << (fs[f].is_outer ? " (outer)" : "")
          << ": label=" << labeling.labels[f] << " boundary=";
      for (std::size_t i = 0; i < fs[f].darts.size(); ++i)
        out << (i ? "-" : "") << desc(comp, rot.dart_origin(fs[f].darts[i]));
      out << "\n";
    }
    try {
      sptw::MinAdjFaces sel = sptw::minimally_adjacent_faces(rot, comp, fs, labeling);
      out << "pair: f1=" << sel.f1 << " f2=" << sel.f2 << " path=" << desc(comp, sel.path.u);
      for (int x : sel.path.interior) out << "-" << desc(comp, x);
      out << "-" << desc(comp, sel.path.v) << "\n";
    } catch (const std::invalid_argument& e) {
      out << "pair: none (" << e.what() << ")\n";
    }
  }
  return code;
}

int run_gen(const std::string& kind_name, int k, const std::string& out_path) {
  auto kind = sptw::family_kind_from_string(kind_name);
  if (!kind) {
    std::cerr << "unknown family kind: " << kind_name << "\n";
    return kExitUsage;
  }
  sptw::FamilySpec spec{*kind, k};
  sptw::TaxonTable taxa;
  std::vector<sptw::PhyloTree> trees;
  try {
    trees = sptw::generate(spec, taxa);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  out << "# family: " << sptw::to_string(*kind) << "\n";
  out << "# k: " << trees.size() << "\n";
  switch (*kind) {
    case sptw::FamilyKind::ConflictingQuartets:
      out << "# expected: incompatible, display graph has a K4 minor\n";
      break;
    case sptw::FamilyKind::CompatibleTw3:
      out << "# expected: compatible, display graph treewidth exactly 3\n";
      out << "# witness: " << sptw::write_newick(sptw::witness_supertree(spec, taxa), taxa)
          << "\n";
      break;
    case sptw::FamilyKind::IncompatibleTw3:
      out << "# expected: incompatible (trees 1-2 conflict), display graph treewidth exactly 3\n";
      break;
  }
  for (const auto& t : trees) out << sptw::write_newick(t, taxa) << "\n";
  return kExitCompatible;
}

int run_oracle(const Input& in, bool json, const std::string& out_path) {
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  sptw::TaxonTable taxa;
  auto batches = load(in, taxa);
  const auto& batch = batches.front();

  std::set<sptw::TaxonId> all;
  for (const auto& t : batch.trees) all.insert(t.taxa().begin(), t.taxa().end());
  sptw::DisplayGraph d = sptw::build_display(batch.trees);
  sptw::SimpleGraph g = sptw::graph_of(d);

  std::optional<bool> compatible;
  std::optional<std::string> supertree;
  if (all.size() <= 9) {
    auto s = sptw::brute_force_compatible(batch.trees);
    compatible = s.has_value();
    if (s) supertree = sptw::write_newick(*s, taxa);
  }
  std::optional<int> tw;
  if (d.vertex_count() <= 20) tw = sptw::exact_treewidth(g);

  if (json) {
    ordered_json j;
    j["compatible"] = compatible ? ordered_json(*compatible) : ordered_json(nullptr);
    j["supertree"] = supertree ? ordered_json(*supertree) : ordered_json(nullptr);
    j["treewidth"] = tw ? ordered_json(*tw) : ordered_json(nullptr);
    out << j.dump(2) << "\n";
  } else {
    out << "compatible: " << (compatible ? (*compatible ? "true" : "false") : "unknown (>9 taxa)")
        << "\n";
    if (supertree) out << "supertree: " << *supertree << "\n";
    if (tw)
      out << "treewidth: " << *tw << "\n";
    else
      out << "treewidth: unknown (>20 vertices)\n";
  }
  if (!compatible) return kExitUnknown;
  return *compatible ? kExitCompatible : kExitIncompatible;
}

const char* kPalette[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
                          "#a65628", "#f781bf", "#999999", "#66c2a5", "#fc8d62"};

int run_dot(const Input& in, bool with_faces, const std::string& out_path) {
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  sptw::TaxonTable taxa;
  auto batches = load(in, taxa);
  const auto& batch = batches.front();
  sptw::DisplayGraph d = sptw::build_display(batch.trees);

  // face annotations demand an embedding, i.e. treewidth <= 2 per component
  std::vector<std::string> edge_note(d.edge_count());
  if (with_faces) {
    auto comps = sptw::components(d);
    // map component edges back to global ones by endpoints
    std::map<std::pair<int, int>, int> global_edge;
    std::vector<int> vertex_comp(d.vertex_count(), -1), local_id(d.vertex_count(), -1);
    {
      int ci = 0;
      std::vector<int> counters(comps.size(), 0);
      // recompute the same component partition
      for (int e = 0; e < d.edge_count(); ++e)
        global_edge[std::minmax(d.edges[e].u, d.edges[e].v)] = e;
      (void)ci;
    }
    int face_base = 0;
    // rebuild component vertex lists in the same order as components()
    std::vector<std::vector<int>> comp_vertices(comps.size());
    {
      std::vector<int> comp_of(d.vertex_count(), -1);
      int ci = 0;
      for (int start = 0; start < d.vertex_count(); ++start) {
        if (comp_of[start] >= 0) continue;
        std::vector<int> stack{start};
        comp_of[start] = ci;
        comp_vertices[ci].push_back(start);
        while (!stack.empty()) {
          int v = stack.back();
          stack.pop_back();
          for (int e : d.inc[v]) {
            int w = d.other_end(e, v);
            if (comp_of[w] < 0) {
              comp_of[w] = ci;
              comp_vertices[ci].push_back(w);
              stack.push_back(w);
            }
          }
        }
        std::sort(comp_vertices[ci].begin(), comp_vertices[ci].end());
        ++ci;
      }
    }
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
      const auto& comp = comps[ci];
      sptw::SimpleGraph g = sptw::graph_of(comp);
      auto [ok, trace] = sptw::is_tw_le_2(g);
      if (!ok) {
        std::cerr << "component " << ci << " has treewidth > 2; cannot annotate faces\n";
        return kExitUnknown;
      }
      sptw::RotationSystem rot = sptw::embed(g, trace);
      auto fs = sptw::faces(rot);
      auto labeling = sptw::face_labels(rot, fs);
      std::vector<int> face_of_dart(2 * rot.edge_count());
      for (std::size_t f = 0; f < fs.size(); ++f)
        for (int dt : fs[f].darts) face_of_dart[dt] = static_cast<int>(f);
      for (int e = 0; e < rot.edge_count(); ++e) {
        auto [lu, lv] = rot.edge_vx[e];
        int gu = comp_vertices[ci][lu], gv = comp_vertices[ci][lv];
        int ge = global_edge.at(std::minmax(gu, gv));
        int f1 = face_of_dart[2 * e], f2 = face_of_dart[2 * e + 1];
        edge_note[ge] = "f" + std::to_string(face_base + f1) + ":" +
                        std::to_string(labeling.labels[f1]) + "|f" +
                        std::to_string(face_base + f2) + ":" +
                        std::to_string(labeling.labels[f2]);
      }
      face_base += static_cast<int>(fs.size());
    }
  }

  out << "graph display {\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  for (int v = 0; v < d.vertex_count(); ++v) {
    if (d.is_taxon(v)) {
      out << "  v" << v << " [shape=box, label=\"" << taxa.label(d.verts[v].taxon) << "\"];\n";
    } else {
      out << "  v" << v << " [shape=circle, label=\"T" << d.verts[v].tree << "\", color=\""
          << kPalette[d.verts[v].tree % 10] << "\"];\n";
    }
  }
  for (int e = 0; e < d.edge_count(); ++e) {
    out << "  v" << d.edges[e].u << " -- v" << d.edges[e].v << " [color=\""
        << kPalette[d.edges[e].tree % 10] << "\"";
    if (with_faces && !edge_note[e].empty()) out << ", label=\"" << edge_note[e] << "\"";
    out << "];\n";
  }
  out << "}\n";
  return kExitCompatible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phylogenetic tree compatibility via display-graph treewidth"};
  app.require_subcommand(1);
  int seed = 0;  // reserved; generators are deterministic
  app.add_option("--seed", seed, "reserved for future randomized modes");

  Input in;
  bool json = false, use_oracle = false, with_faces = false;
  std::string out_path;
  std::string gen_kind;
  int gen_k = 3;

  auto add_inputs = [&](CLI::App* cmd) {
    cmd->add_option("files", in.files, "Newick files, one tree per line ('-' for stdin)");
    cmd->add_option("-o,--output", out_path, "write output to a file instead of stdout");
  };

  CLI::App* check = app.add_subcommand("check", "decide compatibility, construct a supertree");
  add_inputs(check);
  check->add_flag("--json", json, "machine-readable report");
  check->add_flag("--oracle", use_oracle,
                  "fall back to exhaustive search when the treewidth test is inconclusive "
                  "(at most 9 taxa)");
  check->add_flag("--per-file", in.per_file, "treat each input file as its own instance");

  CLI::App* supertree = app.add_subcommand("supertree", "print only the supertree in Newick");
  add_inputs(supertree);
  supertree->add_flag("--oracle", use_oracle, "exhaustive fallback (at most 9 taxa)");

  CLI::App* tw = app.add_subcommand("tw", "treewidth-<=2 test with K4 witness");
  add_inputs(tw);
  tw->add_flag("--json", json, "machine-readable report");

  CLI::App* faces_cmd = app.add_subcommand("faces", "face census of the display graph embedding");
  add_inputs(faces_cmd);

  CLI::App* gen = app.add_subcommand("gen", "generate a built-in instance family");
  gen->add_option("kind", gen_kind,
                  "conflicting_quartets | compatible_tw3 | incompatible_tw3")
      ->required();
  gen->add_option("k", gen_k, "tree count (>= 3 for the treewidth-3 kinds)");
  gen->add_option("-o,--output", out_path, "write output to a file instead of stdout");

  CLI::App* oracle = app.add_subcommand("oracle", "exhaustive compatibility and exact treewidth");
  add_inputs(oracle);
  oracle->add_flag("--json", json, "machine-readable report");

  CLI::App* dot = app.add_subcommand("dot", "DOT export of the display graph");
  add_inputs(dot);
  dot->add_flag("--faces", with_faces, "annotate edges with face indices and labels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (check->parsed()) return run_check(in, json, use_oracle, false, out_path);
    if (supertree->parsed()) return run_check(in, false, use_oracle, true, out_path);
    if (tw->parsed()) return run_tw(in, json, out_path);
    if (faces_cmd->parsed()) return run_faces(in, out_path);
    if (gen->parsed()) return run_gen(gen_kind, gen_k, out_path);
    if (oracle->parsed()) return run_oracle(in, json, out_path);
    if (dot->parsed()) return run_dot(in, with_faces, out_path);
  } catch (const sptw::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitUsage;
}
