#include "outfn/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "outfn/cmt.hpp"
#include "outfn/cvmetric.hpp"
#include "outfn/decide.hpp"
#include "outfn/stallings.hpp"

namespace outfn::cli {

using json = nlohmann::json;

Endo parse_automorphism(std::string_view text) { return Endo::parse(text); }

std::optional<std::filesystem::path> default_cache_dir() {
  if (const char *d = std::getenv("OUTFN_CACHE_DIR"); d && *d)
    return std::filesystem::path(d);
  if (const char *d = std::getenv("XDG_CACHE_HOME"); d && *d)
    return std::filesystem::path(d) / "outfn";
  if (const char *d = std::getenv("HOME"); d && *d)
    return std::filesystem::path(d) / ".cache" / "outfn";
  return std::nullopt;
}

namespace {

/// Bad input that is not a command-line syntax problem.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

OuterAut automorphism_arg(const std::string &text, const char *what) {
  Endo e;
  try {
    e = parse_automorphism(text);
  } catch (const std::exception &ex) {
    throw InputError(std::string(what) + ": " + ex.what());
  }
  try {
    return OuterAut::verify(std::move(e));
  } catch (const NotAnAutomorphism &) {
    throw InputError(std::string(what) + ": not an automorphism: " + text);
  }
}

json endo_json(const Endo &e) {
  json images = json::array();
  for (const FreeWord &w : e.images())
    images.push_back(w.str());
  return {{"rank", e.rank()}, {"images", images}};
}

std::string blocks_text(const VisibleReduction &r) {
  std::string s;
  for (std::size_t i = 0; i < r.blocks.size(); ++i) {
    if (i)
      s += ',';
    s += format_letter_set(r.blocks[i]);
  }
  return s;
}

json blocks_json(const VisibleReduction &r) {
  json a = json::array();
  for (LetterSet b : r.blocks)
    a.push_back(format_letter_set(b));
  return a;
}

class Runner {
public:
  Runner(RunConfig cfg, std::ostream &out, std::ostream &err)
      : cfg_(std::move(cfg)), out_(out), err_(err), start_(std::chrono::steady_clock::now()) {}

  int norm_cmd(const std::string &phi_text) {
    OuterAut phi = automorphism_arg(phi_text, "phi");
    Rational v = norm(phi);
    json rec = record("norm", v.str());
    return emit(rec, [&] { out_ << v << '\n'; });
  }

  int is_aut_cmd(const std::string &text) {
    Endo e;
    try {
      e = parse_automorphism(text);
    } catch (const std::exception &ex) {
      throw InputError(std::string("phi: ") + ex.what());
    }
    const char *v = is_automorphism(e) ? "YES" : "NO";
    return emit(record("is-aut", v), [&] { out_ << v << '\n'; });
  }

  int conjugate_cmd(const std::string &phi_text, const std::string &psi_text,
                    bool check_irreducible) {
    OuterAut phi = automorphism_arg(phi_text, "phi");
    OuterAut psi = automorphism_arg(psi_text, "psi");
    if (phi.rank() != psi.rank())
      throw InputError("phi and psi have different ranks");
    if (phi.rank() < 2)
      throw InputError("conjugacy search needs rank >= 2");
    Rational top = std::max(norm(phi), norm(psi));
    if (cfg_.mu && *cfg_.mu <= top)
      throw InputError("--mu must exceed max(norm(phi), norm(psi)) = " + top.str());
    CmtSet gens = generators(phi.rank());

    if (check_irreducible) {
      IrreducibilityResult ir = detect_irreducible(phi, cfg_.mu, gens, options());
      if (!ir.irreducible) {
        throw InputError("phi is reducible (blocks " + blocks_text(ir.witness->reduction) +
                         "); the conjugacy test needs irreducible input");
      }
    }

    ConjugacyResult r = conjugacy_irreducible(phi, psi, cfg_.mu, gens, options());
    const char *verdict = r.conjugate ? "YES" : "NO";
    json rec = record("conjugate", verdict);
    rec["members"] = r.members;
    rec["max_norm"] = r.max_norm.str();
    rec["mu"] = r.mu.str();
    rec["cap"] = r.cap.str();
    if (r.conjugate) {
      json steps = json::array();
      for (std::size_t g : r.path)
        steps.push_back({{"index", g}, {"generator", endo_json(gens.generators[g].forward.repr())}});
      rec["witness"] = {{"path", steps}, {"conjugator", endo_json(r.conjugator->repr())}};
    }
    return emit(rec, [&] {
      out_ << verdict << '\n';
      if (r.conjugate) {
        out_ << "conjugator:";
        if (r.path.empty())
          out_ << " identity";
        for (auto it = r.path.rbegin(); it != r.path.rend(); ++it)
          out_ << " z" << *it;
        out_ << '\n';
        for (auto it = r.path.rbegin(); it != r.path.rend(); ++it)
          out_ << "  z" << *it << " = " << gens.generators[*it].forward.str() << '\n';
        out_ << "  tau = " << r.conjugator->str() << '\n';
      }
      telemetry(r.members, r.max_norm, r.mu, r.cap);
      if (!r.conjugate && !check_irreducible)
        err_ << "note: NO is conclusive only when phi is irreducible\n";
    });
  }

  int irreducible_cmd(const std::string &phi_text) {
    OuterAut phi = automorphism_arg(phi_text, "phi");
    if (phi.rank() < 2)
      throw InputError("irreducibility search needs rank >= 2");
    if (cfg_.mu && *cfg_.mu <= norm(phi))
      throw InputError("--mu must exceed norm(phi) = " + norm(phi).str());
    CmtSet gens = generators(phi.rank());
    IrreducibilityResult r = detect_irreducible(phi, cfg_.mu, gens, options());
    const char *verdict = r.irreducible ? "IRREDUCIBLE" : "REDUCIBLE";
    json rec = record("irreducible", verdict);
    rec["members"] = r.members;
    rec["scanned"] = r.scanned;
    rec["max_norm"] = r.max_norm.str();
    rec["mu"] = r.mu.str();
    rec["cap"] = r.cap.str();
    if (r.witness) {
      json steps = json::array();
      for (std::size_t g : r.witness->path)
        steps.push_back(g);
      rec["witness"] = {{"blocks", blocks_json(r.witness->reduction)},
                        {"psi", endo_json(r.witness->psi.repr())},
                        {"path", steps},
                        {"conjugator", endo_json(r.witness->conjugator.repr())}};
    }
    return emit(rec, [&] {
      out_ << verdict << '\n';
      if (r.witness) {
        out_ << "blocks: " << blocks_text(r.witness->reduction) << '\n';
        out_ << "psi: " << r.witness->psi.str() << '\n';
        out_ << "tau: " << r.witness->conjugator.str() << '\n';
      }
      telemetry(r.members, r.max_norm, r.mu, r.cap);
    });
  }

  int displacement_cmd(const std::string &phi_text, const std::string &graph_file) {
    OuterAut phi = automorphism_arg(phi_text, "phi");
    MarkedMetricGraph x = MarkedMetricGraph::uniform_rose(phi.rank());
    if (!graph_file.empty()) {
      std::ifstream in(graph_file);
      if (!in)
        throw InputError("cannot read " + graph_file);
      std::stringstream buf;
      buf << in.rdbuf();
      try {
        x = MarkedMetricGraph::parse(buf.str());
      } catch (const std::exception &ex) {
        throw InputError(graph_file + ": " + ex.what());
      }
      if (x.rank() != phi.rank())
        throw InputError("graph rank differs from the automorphism rank");
    }
    Rational v = displacement(x, phi);
    return emit(record("displacement", v.str()), [&] { out_ << v << '\n'; });
  }

  int cmt_gens_cmd(int rank) {
    if (rank < 1 || rank > 3)
      throw InputError("cmt-gens supports ranks 1 to 3");
    CmtSet s = generators(rank);
    json rec = record("cmt-gens", std::to_string(s.generators.size()));
    rec["max_norm"] = s.max_norm.str();
    json list = json::array();
    for (const CmtGenerator &g : s.generators)
      list.push_back(g.forward.str());
    rec["generators"] = list;
    return emit(rec, [&] {
      for (const CmtGenerator &g : s.generators)
        out_ << g.forward.str() << '\n';
      err_ << "generators " << s.generators.size() << ", max norm " << s.max_norm << '\n';
    });
  }

  int fold_cmd(const std::string &words_text, int rank) {
    std::vector<FreeWord> words;
    std::stringstream ss(words_text);
    int needed = 0;
    for (std::string tok; std::getline(ss, tok, ',');) {
      tok.erase(std::remove_if(tok.begin(), tok.end(), [](unsigned char c) { return std::isspace(c); }),
                tok.end());
      try {
        words.push_back(FreeWord::parse(tok));
      } catch (const std::exception &ex) {
        throw InputError(ex.what());
      }
      needed = std::max(needed, words.back().max_rank());
    }
    if (rank == 0)
      rank = std::max(needed, 1);
    if (needed > rank)
      throw InputError("a word uses letters beyond --rank");
    LabeledGraph g = subgroup_graph(words, rank);
    int sub_rank = static_cast<int>(g.edges().size()) - g.vertex_count() + 1;
    json rec = record("fold", std::to_string(sub_rank));
    json edges = json::array();
    for (const LabeledEdge &e : g.edges())
      edges.push_back({e.origin, std::string(1, static_cast<char>('a' + e.label)), e.terminus});
    rec["graph"] = {{"vertices", g.vertex_count()}, {"base", g.base().value_or(0)}, {"edges", edges}};
    return emit(rec, [&] {
      out_ << "rank " << sub_rank << '\n' << g.dump();
    });
  }

  int visibly_reducible_cmd(const std::string &phi_text) {
    OuterAut phi = automorphism_arg(phi_text, "phi");
    auto r = visibly_reducible(phi);
    const char *verdict = r ? "YES" : "NO";
    json rec = record("visibly-reducible", verdict);
    if (r)
      rec["witness"] = {{"blocks", blocks_json(*r)}};
    return emit(rec, [&] {
      out_ << verdict << '\n';
      if (r)
        out_ << "blocks: " << blocks_text(*r) << '\n';
    });
  }

private:
  ClosureOptions options() const { return {cfg_.threads, 32}; }

  CmtSet generators(int rank) { return load_cmt_generators(rank, cfg_.cache_dir); }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  json record(const std::string &command, const std::string &verdict) const {
    return {{"command", command}, {"verdict", verdict}, {"witness", nullptr},
            {"members", nullptr}, {"max_norm", nullptr}};
  }

  void telemetry(std::size_t members, const Rational &max_norm, const Rational &mu,
                 const Rational &cap) {
    err_ << "members " << members << ", max norm " << max_norm << ", mu " << mu << ", cap "
         << cap << ", elapsed " << std::fixed << std::setprecision(3) << elapsed() << "s\n";
  }

  template <typename Human> int emit(json rec, Human &&human) {
    if (cfg_.json) {
      rec["elapsed"] = elapsed();
      out_ << rec.dump() << '\n';
    } else {
      human();
    }
    return 0;
  }

  RunConfig cfg_;
  std::ostream &out_;
  std::ostream &err_;
  std::chrono::steady_clock::time_point start_;
};

} // namespace

int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Decision procedures for outer automorphisms of free groups", "outfn"};
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  std::string cache_dir;
  bool no_cache = false;
  std::string mu_text;
  app.add_flag("--json", cfg.json, "Emit one JSON record per command");
  app.add_option("--cache-dir", cache_dir, "Directory for cached generator sets");
  app.add_flag("--no-cache", no_cache, "Do not read or write the generator cache");
  app.add_option("--threads", cfg.threads, "Worker threads for closure searches")
      ->check(CLI::Range(1u, 1024u));

  std::string phi, psi, graph_file, words;
  bool check_irreducible = false;
  int rank = 0;

  auto *norm_cmd = app.add_subcommand("norm", "Print ||phi||_B");
  norm_cmd->add_option("phi", phi, "Automorphism, e.g. \"a->ab, b->a\"")->required();

  auto *aut_cmd = app.add_subcommand("is-aut", "Check whether the images form a basis");
  aut_cmd->add_option("phi", phi, "Endomorphism")->required();

  auto *conj_cmd = app.add_subcommand("conjugate", "Decide conjugacy in Out(F_n)");
  conj_cmd->add_option("phi", phi, "First automorphism")->required();
  conj_cmd->add_option("psi", psi, "Second automorphism")->required();
  conj_cmd->add_option("--mu", mu_text, "Norm bound (default: max norm + 1)");
  conj_cmd->add_flag("--check-irreducible", check_irreducible,
                     "Refuse to answer unless phi is irreducible");

  auto *irr_cmd = app.add_subcommand("irreducible", "Decide irreducibility");
  irr_cmd->add_option("phi", phi, "Automorphism")->required();
  irr_cmd->add_option("--mu", mu_text, "Norm bound (default: norm + 1)");

  auto *disp_cmd = app.add_subcommand("displacement", "Print Lambda(X, phi X)");
  disp_cmd->add_option("phi", phi, "Automorphism")->required();
  disp_cmd->add_option("--graph", graph_file, "Marked metric graph file (default: uniform rose)");

  auto *gens_cmd = app.add_subcommand("cmt-gens", "List the generator set of Out(F_n)");
  gens_cmd->add_option("rank", rank, "Rank")->required();

  auto *fold_cmd = app.add_subcommand("fold", "Stallings graph of a subgroup");
  fold_cmd->add_option("words", words, "Comma-separated generators, e.g. \"ab, Ba\"")->required();
  fold_cmd->add_option("--rank", rank, "Ambient rank (default: from the words)");

  auto *vis_cmd = app.add_subcommand("visibly-reducible", "Search for an invariant free-factor system on the basis");
  vis_cmd->add_option("phi", phi, "Automorphism")->required();

  try {
    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    app.parse(rest);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!mu_text.empty()) {
      try {
        cfg.mu = Rational::parse(mu_text);
      } catch (const std::exception &ex) {
        throw InputError(std::string("--mu: ") + ex.what());
      }
    }
    if (!no_cache)
      cfg.cache_dir = cache_dir.empty() ? default_cache_dir() : std::filesystem::path(cache_dir);

    Runner run(cfg, out, err);
    if (*norm_cmd)
      return run.norm_cmd(phi);
    if (*aut_cmd)
      return run.is_aut_cmd(phi);
    if (*conj_cmd)
      return run.conjugate_cmd(phi, psi, check_irreducible);
    if (*irr_cmd)
      return run.irreducible_cmd(phi);
    if (*disp_cmd)
      return run.displacement_cmd(phi, graph_file);
    if (*gens_cmd)
      return run.cmt_gens_cmd(rank);
    if (*fold_cmd)
      return run.fold_cmd(words, rank);
    if (*vis_cmd)
      return run.visibly_reducible_cmd(phi);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

} // namespace outfn::cli
