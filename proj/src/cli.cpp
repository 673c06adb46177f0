#include "weaksc/cli.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <csignal>
#include <cstdlib>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "weaksc/closure.hpp"
#include "weaksc/elicit.hpp"
#include "weaksc/error.hpp"
#include "weaksc/gen.hpp"
#include "weaksc/io.hpp"
#include "weaksc/oracle.hpp"
#include "weaksc/recognize.hpp"
#include "weaksc/sctree.hpp"
#include "weaksc/service.hpp"

namespace weaksc::cli {
namespace {

using nlohmann::json;

std::shared_ptr<spdlog::logger> logger() {
  static auto instance = [] {
    auto l = spdlog::stderr_color_st("weaksc");
    auto level = spdlog::level::warn;
    if (const char* env = std::getenv("CF_LOG")) level = spdlog::level::from_str(env);
    l->set_level(level);
    l->set_pattern("[%l] %v");
    return l;
  }();
  return instance;
}

// Negative verdicts travel as a result, not an exception.
struct Outcome {
  int code = ok;
};

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_text_file(path, text);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string render_profile(const CandidateNames& names, const Profile& p, const std::string& format) {
  return format == "text" ? profile_to_text(names, p) : dump(profile_to_json(names, p));
}

VoterSequence parse_order(const std::string& spec, const Profile& p, std::uint64_t seed) {
  auto ids = VoterSequence::of(p).order();
  if (spec == "file-order") return VoterSequence(ids);
  if (spec == "random") {
    std::mt19937_64 rng(seed);
    std::shuffle(ids.begin(), ids.end(), rng);
    return VoterSequence(ids);
  }
  std::vector<VoterId> order;
  std::stringstream in(spec);
  for (std::string item; std::getline(in, item, ',');) {
    try {
      std::size_t used = 0;
      order.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw FormatError("--order: '" + item + "' is not a voter id");
    }
  }
  VoterSequence seq = [&] {
    try {
      return VoterSequence(order);
    } catch (const ArgumentError&) {
      throw FormatError("--order repeats a voter id");
    }
  }();
  if (!seq.covers(p)) throw FormatError("--order must list every voter id exactly once");
  return seq;
}

std::string certificate_text(const CandidateNames& names, const Certificate& c) {
  const auto j = certificate_to_json(names, c);
  std::string line = "no: " + j["kind"].get<std::string>();
  if (j.contains("reason")) line += " (" + j["reason"].get<std::string>() + ")";
  if (j.contains("orders"))
    for (const auto& o : j["orders"]) {
      line += " ";
      for (const auto& n : o) line += n.get<std::string>();
    }
  return line + "\n";
}

Outcome do_recognize(const std::string& in, const std::string& tree_out, const std::string& format,
                     std::ostream& out) {
  const auto doc = read_profile_file(in);
  logger()->info("recognize: m={} n={}", doc.profile.candidate_count(), doc.profile.size());
  const auto r = recognize_weakly_sc(doc.profile);
  if (!r.yes()) {
    out << (format == "text" ? certificate_text(doc.candidates, *r.certificate)
                             : dump({{"verdict", "no"}, {"certificate", certificate_to_json(doc.candidates, *r.certificate)}}));
    return {negative};
  }
  if (!tree_out.empty()) write_text_file(tree_out, dump(tree_to_json(doc.candidates, *r.tree)));
  if (format == "text") {
    out << "yes: closure of " << r.closure->closure.size() << " preferences\n";
  } else {
    out << dump({{"verdict", "yes"},
                 {"closure_size", r.closure->closure.size()},
                 {"added", closure_witnesses_to_json(doc.candidates, *r.closure)["added"]}});
  }
  return {ok};
}

Outcome do_closure(const std::string& in, const std::string& path, std::string witnesses, const std::string& format,
                   std::ostream& out) {
  const auto doc = read_profile_file(in);
  auto closed = triad_closure(doc.profile);
  if (auto* f = std::get_if<ClosureFailure>(&closed)) {
    out << dump({{"verdict", "no"}, {"certificate", certificate_to_json(doc.candidates, *f)}});
    return {negative};
  }
  const auto& c = std::get<ClosureResult>(closed);
  logger()->info("closure: {} distinct, {} added", c.closure.size() - c.added.size(), c.added.size());
  emit(out, path, render_profile(doc.candidates, c.closure, format));
  if (witnesses.empty() && !path.empty() && path != "-") witnesses = path + ".witnesses.json";
  if (!witnesses.empty()) write_text_file(witnesses, dump(closure_witnesses_to_json(doc.candidates, c)));
  return {ok};
}

Outcome do_tree_build(const std::string& in, const std::string& path, std::ostream& out) {
  const auto doc = read_profile_file(in);
  if (doc.profile.empty()) throw FormatError("profile has no voters");
  const auto d = dedupe(doc.profile);
  auto built = build_sc_tree(d.distinct);
  if (auto* none = std::get_if<NoTree>(&built)) {
    out << dump({{"verdict", "no"}, {"certificate", certificate_to_json(doc.candidates, *none)}});
    return {negative};
  }
  const auto tree = expand_duplicates(std::get<VoterTree>(built), d.groups);
  emit(out, path, dump(tree_to_json(doc.candidates, tree)));
  return {ok};
}

Outcome do_tree_verify(const std::string& in, const std::string& tree_path, const std::string& mode,
                       std::ostream& out) {
  const auto doc = read_profile_file(in);
  const auto tree = read_tree_file(doc.candidates, tree_path);
  bool good = false;
  try {
    good = verify_single_crossing_tree(doc.profile, tree, mode == "paths" ? VerifyMode::paths : VerifyMode::cut);
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("tree does not match the profile: ") + e.what());
  }
  out << (good ? "single crossing\n" : "not single crossing\n");
  return {good ? ok : negative};
}

struct ElicitFlags {
  std::string profile;
  std::string order = "file-order";
  std::uint64_t seed = 0;
  std::string report;
  std::string out;
  std::string format = "json";
};

Outcome do_elicit(const ElicitFlags& f, bool naive, std::ostream& out) {
  const auto doc = read_profile_file(f.profile);
  if (doc.profile.empty()) throw FormatError("profile has no voters");
  const auto arrival = parse_order(f.order, doc.profile, f.seed);

  SimulatedOracle base_oracle(doc.profile);
  const auto baseline = naive_elicit_all(base_oracle, arrival);
  ElicitationReport report = baseline;
  if (!naive) {
    SimulatedOracle oracle(doc.profile);
    try {
      report = elicit_sequential(oracle, arrival);
    } catch (const DomainViolation& e) {
      out << dump({{"verdict", "no"}, {"certificate", certificate_to_json(doc.candidates, e.certificate())}});
      return {negative};
    }
  }
  if (!(report.profile == doc.profile)) throw InternalError("elicited profile differs from the hidden profile");
  logger()->info("elicit: {} queries, naive {}", report.total_queries, baseline.total_queries);

  emit(out, f.out, render_profile(doc.candidates, report.profile, f.format));
  if (!f.report.empty()) {
    auto j = report_to_json(doc.candidates, report);
    j["naive_queries"] = baseline.total_queries;
    j["algorithm"] = naive ? "naive" : "sequential";
    j["arrival"] = arrival.order();
    write_text_file(f.report, dump(j));
  }
  return {ok};
}

struct BenchFlags {
  std::vector<std::size_t> ms{4, 6, 8};
  std::vector<std::size_t> ns{10, 100};
  std::size_t instances = 1;
  std::uint64_t seed = 1;
  std::string branching = "random";
  std::string out;
};

Outcome do_bench(const BenchFlags& f, std::ostream& out) {
  const auto style = parse_branching(f.branching);
  std::ostringstream csv;
  csv << "m,n,total_queries,bound_value,naive_queries\n";
  std::mt19937_64 rng(f.seed);
  for (auto m : f.ms)
    for (auto n : f.ns)
      for (std::size_t k = 0; k < f.instances; ++k) {
        if (m < 1 || n < 1) throw FormatError("bench sizes must be positive");
        GenSpec spec{m, std::min(n, pair_count(m) + 1), style, 1, 1.0, rng()};
        const auto [nodes, tree] = gen_sc_tree_profile(spec);
        std::vector<std::size_t> keep(n);
        for (auto& i : keep) i = std::uniform_int_distribution<std::size_t>(0, nodes.size() - 1)(rng);
        const auto hidden = subsample_nodes(nodes, keep, 1);
        auto ids = VoterSequence::of(hidden).order();
        std::shuffle(ids.begin(), ids.end(), rng);
        const VoterSequence arrival(ids);

        SimulatedOracle a(hidden), b(hidden);
        const auto seq = elicit_sequential(a, arrival);
        const auto naive = naive_elicit_all(b, arrival);
        if (!(seq.profile == hidden)) throw InternalError("bench: elicited profile differs from the hidden profile");
        csv << m << ',' << n << ',' << seq.total_queries << ',' << sequential_query_budget(m, n) << ','
            << naive.total_queries << '\n';
      }
  emit(out, f.out, csv.str());
  return {ok};
}

struct GenerateFlags {
  std::size_t m = 4;
  std::size_t nodes = 0;
  std::string branching = "random";
  std::size_t duplication = 1;
  double fraction = 1.0;
  std::uint64_t seed = 0;
  std::string negative;
  std::size_t n = 3;
  std::string out;
  std::string tree_out;
  std::string format = "json";
};

Outcome do_generate(const GenerateFlags& f, std::ostream& out) {
  const auto names = CandidateNames::letters(f.m);
  if (!f.negative.empty()) {
    if (!f.tree_out.empty()) throw FormatError("--tree-out cannot be combined with --negative");
    const auto kind = f.negative == "condorcet" ? NegativeKind::condorcet_triple : NegativeKind::random_noise;
    emit(out, f.out, render_profile(names, gen_negative(kind, f.m, f.n, f.seed), f.format));
    return {ok};
  }
  if (!f.tree_out.empty() && f.fraction < 1.0)
    throw FormatError("--tree-out needs --fraction 1: a subsample is only weakly single crossing");
  const GenSpec spec{f.m, f.nodes == 0 ? pair_count(f.m) + 1 : f.nodes, parse_branching(f.branching), f.duplication,
                     f.fraction, f.seed};
  const auto [nodes, tree] = gen_sc_tree_profile(spec);
  const auto profile = subsample_weakly_sc(nodes, tree, spec);
  emit(out, f.out, render_profile(names, profile, f.format));
  if (!f.tree_out.empty()) {
    // Node i keeps the id of its first copy; further copies hang off it.
    std::vector<TreeNode> renamed;
    std::vector<std::vector<VoterId>> groups;
    for (std::size_t i = 0; i < tree.size(); ++i) {
      std::vector<VoterId> group;
      for (std::size_t d = 0; d < f.duplication; ++d) group.push_back(static_cast<VoterId>(i * f.duplication + d));
      renamed.push_back({group.front(), tree.node(i).preference});
      groups.push_back(std::move(group));
    }
    const auto full = expand_duplicates(VoterTree(std::move(renamed), tree.edges()), groups);
    write_text_file(f.tree_out, dump(tree_to_json(names, full)));
  }
  return {ok};
}

HttpService* g_server = nullptr;

Outcome do_serve(const std::string& host, int port, const std::string& state_dir, std::ostream& out) {
  SessionManager sessions(state_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(state_dir));
  const auto restored = sessions.restore();
  HttpService server(sessions);
  const int bound = server.bind(host, port);
  if (bound < 0) throw FormatError("cannot bind " + host + ":" + std::to_string(port));
  out << "listening on http://" << host << ":" << bound << " (" << restored << " sessions restored)" << std::endl;
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  server.listen();
  g_server = nullptr;
  return {ok};
}

void add_format(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weakly single crossing profiles on trees: recognition, closure and elicitation", "weaksc"};
  app.require_subcommand(1);

  std::string in, path, aux, format = "json", mode = "cut";

  auto* recognize = app.add_subcommand("recognize", "Decide membership; prints a certificate on rejection");
  recognize->add_option("--in", in, "Profile file")->required();
  recognize->add_option("--tree-out", aux, "Write the tree on the closure here");
  add_format(recognize, format);

  auto* closure = app.add_subcommand("closure", "Triad majority closure");
  closure->add_option("--in", in, "Profile file")->required();
  closure->add_option("--out", path, "Closure profile (default stdout)");
  closure->add_option("--witnesses", aux, "Witness sidecar (default <out>.witnesses.json)");
  add_format(closure, format);

  auto* tree = app.add_subcommand("tree", "Single crossing trees");
  tree->require_subcommand(1);
  auto* build = tree->add_subcommand("build", "Build a single crossing tree");
  build->add_option("--in", in, "Profile file")->required();
  build->add_option("--out", path, "Tree file (default stdout)");
  auto* verify = tree->add_subcommand("verify", "Check a tree against a profile");
  verify->add_option("--in", in, "Profile file")->required();
  verify->add_option("--tree", aux, "Tree file")->required();
  verify->add_option("--mode", mode, "cut or paths")->check(CLI::IsMember({"cut", "paths"}));

  ElicitFlags ef;
  auto add_elicit_flags = [&](CLI::App* cmd) {
    cmd->add_option("--profile", ef.profile, "Hidden profile answering the queries")->required();
    cmd->add_option("--order", ef.order, "random, file-order, or comma separated voter ids");
    cmd->add_option("--seed", ef.seed, "Seed for --order random");
    cmd->add_option("--report", ef.report, "JSON report file");
    cmd->add_option("--out", ef.out, "Elicited profile (default stdout)");
    add_format(cmd, ef.format);
  };
  auto* elicit = app.add_subcommand("elicit", "Sequential elicitation against a simulated oracle");
  add_elicit_flags(elicit);
  auto* naive = app.add_subcommand("naive-elicit", "Sort every voter independently");
  add_elicit_flags(naive);

  BenchFlags bf;
  auto* bench = app.add_subcommand("bench", "Query counts over generated instances, as CSV");
  bench->add_option("--m", bf.ms, "Candidate counts")->delimiter(',');
  bench->add_option("--n", bf.ns, "Voter counts")->delimiter(',');
  bench->add_option("--instances", bf.instances, "Instances per (m, n)");
  bench->add_option("--seed", bf.seed, "Seed");
  bench->add_option("--branching", bf.branching, "path, star or random")
      ->check(CLI::IsMember({"path", "star", "random"}));
  bench->add_option("--out", bf.out, "CSV file (default stdout)");

  GenerateFlags gf;
  auto* generate = app.add_subcommand("generate", "Generate a profile and its tree");
  generate->add_option("--m", gf.m, "Candidates")->check(CLI::Range(1, 702));
  generate->add_option("--nodes", gf.nodes, "Tree nodes (default m(m-1)/2 + 1)");
  generate->add_option("--branching", gf.branching, "path, star or random")
      ->check(CLI::IsMember({"path", "star", "random"}));
  generate->add_option("--duplication", gf.duplication, "Copies per kept node")->check(CLI::PositiveNumber);
  generate->add_option("--fraction", gf.fraction, "Fraction of nodes kept")->check(CLI::Range(0.0, 1.0));
  generate->add_option("--seed", gf.seed, "Seed");
  generate->add_option("--negative", gf.negative, "Generate a rejected profile instead")
      ->check(CLI::IsMember({"condorcet", "noise"}));
  generate->add_option("--n", gf.n, "Voters for --negative");
  generate->add_option("--out", gf.out, "Profile file (default stdout)");
  generate->add_option("--tree-out", gf.tree_out, "Tree sidecar file");
  add_format(generate, gf.format);

  std::string host = "127.0.0.1", state_dir;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the elicitation session service");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "TCP port (0 picks one)")->check(CLI::Range(0, 65535));
  serve->add_option("--state-dir", state_dir, "Directory for session event logs");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? ok : usage;
  }

  try {
    Outcome r;
    if (recognize->parsed()) r = do_recognize(in, aux, format, out);
    else if (closure->parsed()) r = do_closure(in, path, aux, format, out);
    else if (build->parsed()) r = do_tree_build(in, path, out);
    else if (verify->parsed()) r = do_tree_verify(in, aux, mode, out);
    else if (elicit->parsed()) r = do_elicit(ef, false, out);
    else if (naive->parsed()) r = do_elicit(ef, true, out);
    else if (bench->parsed()) r = do_bench(bf, out);
    else if (generate->parsed()) r = do_generate(gf, out);
    else if (serve->parsed()) r = do_serve(host, port, state_dir, out);
    return r.code;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const GenerationError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return internal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return internal;
  }
}

}  // namespace weaksc::cli
