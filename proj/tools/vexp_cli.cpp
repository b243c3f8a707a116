#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "vexp/bave.hpp"
#include "vexp/gadget.hpp"
#include "vexp/gauss.hpp"
#include "vexp/generators.hpp"
#include "vexp/graph.hpp"
#include "vexp/rounding.hpp"
#include "vexp/sdp.hpp"
#include "vexp/sse.hpp"
#include "vexp/transforms.hpp"

namespace {

using nlohmann::json;
using namespace vexp;

WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file: " + path);
  return parse_graph(in);
}

json instance_to_json(const BaveInstance& inst, bool exactMarginals) {
  json tuples = json::array();
  for (const auto& tp : inst.tuples()) tuples.push_back({{"t", tp.t}, {"p", tp.p}});
  return {{"variables", inst.variables()},
          {"d", inst.arity_minus_one()},
          {"tuples", std::move(tuples)},
          {"exactMarginals", exactMarginals}};
}

BaveInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON in " + path);
  std::vector<BaveTuple> tuples;
  for (const auto& tj : j.at("tuples"))
    tuples.push_back({tj.at("t").get<std::vector<std::size_t>>(), tj.at("p").get<double>()});
  const bool exact = j.value("exactMarginals", true);
  return BaveInstance(j.at("variables").get<std::size_t>(), j.at("d").get<std::size_t>(),
                      std::move(tuples), exact ? 1e-9 : -1.0);
}

Assignment load_assignment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open assignment file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_array()) throw ParseError("assignment must be a JSON array");
  return {j.get<std::vector<double>>()};
}

void emit(json report) {
  report["schema"] = 1;
  std::cout << report.dump(2) << "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << text;
}

std::string graph_text(const WeightedGraph& g) {
  std::ostringstream os;
  write_graph(os, g);
  return os.str();
}

int run(int argc, char** argv) {
  CLI::App app{"vertex expansion toolkit"};
  app.require_subcommand(1);

  // exact
  std::string exactFile;
  bool exactSym = false;
  std::optional<double> exactBalance;
  std::size_t exactCap = 20;
  auto* exact = app.add_subcommand("exact", "brute-force minimum vertex expansion");
  exact->add_option("graph", exactFile)->required();
  exact->add_flag("--symmetric", exactSym);
  exact->add_option("--balance", exactBalance);
  exact->add_option("--cap", exactCap);

  // approx
  std::string approxFile;
  int approxReps = 20, approxMaxIter = 20000;
  std::uint64_t approxSeed = 0;
  double approxTol = 1e-5;
  auto* approx = app.add_subcommand("approx", "SDP relaxation with randomized rounding");
  approx->add_option("graph", approxFile)->required();
  approx->add_option("--reps", approxReps);
  approx->add_option("--seed", approxSeed);
  approx->add_option("--tol", approxTol);
  approx->add_option("--max-iter", approxMaxIter);

  // sdp solve
  auto* sdp = app.add_subcommand("sdp", "lambda_inf SDP relaxation");
  std::string sdpFile, sdpDump;
  double sdpTol = 1e-6;
  int sdpMaxIter = 20000;
  std::uint64_t sdpSeed = 0;
  auto* sdpSolve = sdp->add_subcommand("solve", "solve the relaxation");
  sdpSolve->add_option("graph", sdpFile)->required();
  sdpSolve->add_option("--tol", sdpTol);
  sdpSolve->add_option("--max-iter", sdpMaxIter);
  sdpSolve->add_option("--seed", sdpSeed);
  sdpSolve->add_option("--dump-gram", sdpDump);
  sdp->require_subcommand(1);

  // transform
  auto* transform = app.add_subcommand("transform", "graph transformations");
  std::string tfFile, tfOut;
  auto* tfSquare = transform->add_subcommand("square-union", "G^2 union G");
  tfSquare->add_option("graph", tfFile)->required();
  tfSquare->add_option("--out", tfOut);
  auto* tfSub = transform->add_subcommand("subdivide", "weighted edge subdivision");
  tfSub->add_option("graph", tfFile)->required();
  tfSub->add_option("--out", tfOut);
  transform->require_subcommand(1);

  // bave
  auto* bave = app.add_subcommand("bave", "balanced analytic vertex expansion");
  std::string baveFile, baveAssign, baveOut;
  double baveBalance = 0.01;
  std::size_t baveT = 0, baveD = 0;
  std::uint64_t baveSeed = 0;
  auto* bValue = bave->add_subcommand("value", "evaluate an assignment");
  bValue->add_option("instance", baveFile)->required();
  bValue->add_option("--assignment", baveAssign)->required();
  auto* bOpt = bave->add_subcommand("optimum", "exhaustive boolean optimum");
  bOpt->add_option("instance", baveFile)->required();
  bOpt->add_option("--balance-threshold", baveBalance);
  auto* bThresh = bave->add_subcommand("threshold", "level-set rounding");
  bThresh->add_option("instance", baveFile)->required();
  bThresh->add_option("--assignment", baveAssign)->required();
  auto* bUnif = bave->add_subcommand("uniformize", "uniform-marginal construction");
  bUnif->add_option("instance", baveFile)->required();
  bUnif->add_option("--T", baveT);
  bUnif->add_option("--out", baveOut);
  auto* bSample = bave->add_subcommand("sample-graph", "subsample a regular graph");
  bSample->add_option("instance", baveFile)->required();
  bSample->add_option("--D", baveD)->required();
  bSample->add_option("--seed", baveSeed);
  bSample->add_option("--out", baveOut);
  bave->require_subcommand(1);

  // gadget
  auto* gadget = app.add_subcommand("gadget", "dictatorship-test gadget");
  double gEps = 0.1;
  std::size_t gR = 1, gD = 1, gSamples = 100000;
  std::uint64_t gSeed = 0;
  auto* gChain = gadget->add_subcommand("chain", "chain transition data");
  gChain->add_option("--eps", gEps);
  auto* gSpec = gadget->add_subcommand("spectrum", "eigenvalues and gap");
  gSpec->add_option("--eps", gEps);
  auto* gDict = gadget->add_subcommand("dictator", "exact dictator value");
  gDict->add_option("--eps", gEps);
  gDict->add_option("--d", gD);
  auto* gEst = gadget->add_subcommand("estimate", "Monte Carlo dictator value");
  gEst->add_option("--eps", gEps);
  gEst->add_option("--R", gR);
  gEst->add_option("--d", gD);
  gEst->add_option("--samples", gSamples);
  gEst->add_option("--seed", gSeed);
  gadget->require_subcommand(1);

  // gauss
  auto* gauss = app.add_subcommand("gauss", "Gaussian isoperimetry estimators");
  std::size_t gaN = 1, gaD = 8, gaSamples = 100000;
  double gaEps = 0.1, gaSigma = 1.0;
  std::uint64_t gaSeed = 0;
  auto* gaIso = gauss->add_subcommand("iso", "halfspace isoperimetry estimate");
  gaIso->add_option("--n", gaN);
  gaIso->add_option("--d", gaD);
  gaIso->add_option("--eps", gaEps);
  gaIso->add_option("--samples", gaSamples);
  gaIso->add_option("--seed", gaSeed);
  auto* gaTv = gauss->add_subcommand("tv", "shifted total-variation distance");
  gaTv->add_option("--d", gaD);
  gaTv->add_option("--eps", gaEps);
  auto* gaMax = gauss->add_subcommand("maxstat", "max-of-Gaussians statistics");
  gaMax->add_option("--d", gaD);
  gaMax->add_option("--sigma", gaSigma);
  gaMax->add_option("--samples", gaSamples);
  gaMax->add_option("--seed", gaSeed);
  auto* gaPz = gauss->add_subcommand("pz", "Paley-Zygmund probability");
  gaPz->add_option("--n", gaN);
  gaPz->add_option("--samples", gaSamples);
  gaPz->add_option("--seed", gaSeed);
  gauss->require_subcommand(1);

  // reduce
  std::string redFile, redOut;
  std::size_t redR = 2, redD = 5, redSamples = 100000;
  double redEps = 0.1, redEta = -1.0;
  std::uint64_t redSeed = 0;
  auto* reduce = app.add_subcommand("reduce", "fold a graph into a BAVE instance");
  reduce->add_option("graph", redFile)->required();
  reduce->add_option("--R", redR);
  reduce->add_option("--eps", redEps);
  reduce->add_option("--d", redD);
  reduce->add_option("--eta", redEta);
  reduce->add_option("--samples", redSamples);
  reduce->add_option("--seed", redSeed);
  reduce->add_option("--out", redOut);

  // corpus
  std::string corpusGen, corpusOut;
  std::size_t cN = 4, cD = 3, cDim = 3, cK = 4;
  std::uint64_t cSeed = 1;
  auto* corpus = app.add_subcommand("corpus", "generate a corpus graph");
  corpus->add_option("generator", corpusGen)
      ->required()
      ->check(CLI::IsMember(
          {"cycle", "clique", "star", "hypercube", "random-regular", "barbell", "two-cliques"}));
  corpus->add_option("--n", cN);
  corpus->add_option("--d", cD);
  corpus->add_option("--dim", cDim);
  corpus->add_option("--k", cK);
  corpus->add_option("--seed", cSeed);
  corpus->add_option("--out", corpusOut);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*exact) {
    auto g = load_graph(exactFile);
    auto res = exact_min_vertex_expansion(g, exactSym, exactBalance, exactCap);
    json params = {{"graph", exactFile}, {"symmetric", exactSym}, {"cap", exactCap}};
    if (exactBalance) params["balance"] = *exactBalance;
    emit({{"params", params}, {"phiV", res.value}, {"cut", res.cut.members()}});
    return 0;
  }

  if (*approx) {
    auto g = load_graph(approxFile);
    auto res = round_sdp(g, approxReps, approxSeed, approxTol, approxMaxIter);
    emit({{"params",
           {{"graph", approxFile},
            {"reps", approxReps},
            {"seed", approxSeed},
            {"tol", approxTol},
            {"maxIter", approxMaxIter}}},
          {"sdpval", res.report.sdpval},
          {"bound", res.report.bound},
          {"achieved", res.report.achieved},
          {"cut", res.cut.members()},
          {"perRep", res.report.perRep},
          {"sdpIterations", res.report.sdpIterations},
          {"sdpConverged", res.report.sdpConverged}});
    return 0;
  }

  if (*sdpSolve) {
    auto g = load_graph(sdpFile);
    auto sol = solve(build_sdp(g), sdpTol, sdpMaxIter, sdpSeed);
    if (!sdpDump.empty()) {
      std::ostringstream os;
      for (std::size_t i = 0; i < sol.gram.n; ++i) {
        for (std::size_t j = 0; j < sol.gram.n; ++j) os << (j ? " " : "") << sol.gram(i, j);
        os << "\n";
      }
      write_text(sdpDump, os.str());
    }
    emit({{"params",
           {{"graph", sdpFile}, {"tol", sdpTol}, {"maxIter", sdpMaxIter}, {"seed", sdpSeed}}},
          {"value", sol.value},
          {"iterations", sol.iterations},
          {"converged", sol.converged},
          {"residuals",
           {{"maxConstraintViolation", sol.residuals.maxConstraintViolation},
            {"normalizationDeviation", sol.residuals.normalizationDeviation},
            {"minEigenvalue", sol.residuals.minEigenvalue},
            {"dualityGap", sol.residuals.dualityGap}}}});
    return sol.converged ? 0 : 3;
  }

  if (*tfSquare) {
    auto g = load_graph(tfFile);
    auto h = square_union(g);
    if (!tfOut.empty()) write_text(tfOut, graph_text(h));
    json vertexMap = json::object();
    for (VertexId v = 0; v < h.size(); ++v) vertexMap[std::to_string(v)] = v;
    emit({{"params", {{"graph", tfFile}, {"transform", "square-union"}}},
          {"n", h.size()},
          {"m", h.edge_count()},
          {"vertexMap", vertexMap},
          {"graph", graph_text(h)}});
    return 0;
  }

  if (*tfSub) {
    auto g = load_graph(tfFile);
    auto sub = edge_subdivision_weighted(g);
    if (!tfOut.empty()) write_text(tfOut, graph_text(sub.graph));
    json vertexMap = json::object();
    for (VertexId v = 0; v < sub.originalIds.size(); ++v)
      vertexMap[std::to_string(v)] = sub.originalIds[v];
    json edgeVertexOf = json::object();
    for (std::size_t k = 0; k < sub.edgeVertexOf.size(); ++k)
      edgeVertexOf[std::to_string(sub.originalIds.size() + k)] =
          json::array({sub.edgeVertexOf[k].first, sub.edgeVertexOf[k].second});
    emit({{"params", {{"graph", tfFile}, {"transform", "subdivide"}}},
          {"n", sub.graph.size()},
          {"m", sub.graph.edge_count()},
          {"vertexMap", vertexMap},
          {"edgeVertexOf", edgeVertexOf},
          {"graph", graph_text(sub.graph)}});
    return 0;
  }

  if (*bValue) {
    auto inst = load_instance(baveFile);
    auto val = bave_value(inst, load_assignment(baveAssign));
    emit({{"params", {{"instance", baveFile}, {"assignment", baveAssign}}},
          {"numerator", val.numerator},
          {"denominator", val.denominator},
          {"ratio", val.ratio},
          {"zeroVariance", val.zeroVariance}});
    return 0;
  }

  if (*bOpt) {
    auto inst = load_instance(baveFile);
    auto opt = bave_optimum(inst, baveBalance);
    emit({{"params", {{"instance", baveFile}, {"balanceThreshold", baveBalance}}},
          {"ratio", opt.ratio},
          {"denominator", opt.denominator},
          {"assignment", opt.assignment.values}});
    return 0;
  }

  if (*bThresh) {
    auto inst = load_instance(baveFile);
    auto r = threshold_round(inst, load_assignment(baveAssign));
    emit({{"params", {{"instance", baveFile}, {"assignment", baveAssign}}},
          {"threshold", r.threshold},
          {"ratio", r.ratio},
          {"assignment", r.assignment.values}});
    return 0;
  }

  if (*bUnif) {
    auto inst = load_instance(baveFile);
    auto u = uniformize(inst, baveT);
    if (!baveOut.empty()) write_text(baveOut, instance_to_json(u.instance, false).dump(2));
    emit({{"params", {{"instance", baveFile}, {"T", baveT}}},
          {"variables", u.instance.variables()},
          {"cloudOf", u.cloudOf},
          {"instance", instance_to_json(u.instance, false)}});
    return 0;
  }

  if (*bSample) {
    auto inst = load_instance(baveFile);
    auto s = instance_to_graph(inst, baveD, baveSeed);
    if (!baveOut.empty()) write_text(baveOut, graph_text(s.graph));
    emit({{"params", {{"instance", baveFile}, {"D", baveD}, {"seed", baveSeed}}},
          {"n", s.graph.size()},
          {"m", s.graph.edge_count()},
          {"originalIds", s.originalIds},
          {"incidences", s.incidences},
          {"deletedFraction", s.deletedFraction},
          {"graph", graph_text(s.graph)}});
    return 0;
  }

  if (*gChain || *gSpec) {
    auto chain = build_chain(gEps);
    json report = {{"params", {{"eps", gEps}}},
                   {"eigenvalues", chain.eigenvalues},
                   {"gap", chain.gap()},
                   {"nominalGap", gEps}};
    if (*gChain) {
      report["transition"] = chain.transition;
      report["stationary"] = chain.stationary;
      report["basis"] = chain.basis;
    }
    emit(std::move(report));
    return 0;
  }

  if (*gDict) {
    auto v = dictator_value_exact(gEps, gD);
    emit({{"params", {{"eps", gEps}, {"d", gD}}},
          {"numerator", v.numerator},
          {"var1", v.var1}});
    return 0;
  }

  if (*gEst) {
    auto chain = build_chain(gEps);
    auto est = estimate_value(
        chain, gR, gD, [](const std::vector<int>& x) { return dictator_cut(x); }, gSamples,
        gSeed);
    emit({{"params",
           {{"eps", gEps}, {"R", gR}, {"d", gD}, {"samples", gSamples}, {"seed", gSeed}}},
          {"numerator", est.numerator},
          {"numeratorStderr", est.numeratorStderr},
          {"var1", est.var1},
          {"var1Stderr", est.var1Stderr},
          {"ratio", est.ratio},
          {"ratioStderr", est.ratioStderr}});
    return 0;
  }

  if (*gaIso) {
    GaussianGraphSpec spec;
    spec.lambda.assign(gaN, std::sqrt(1.0 - gaEps));
    spec.sigma.assign(gaN, gaEps);
    spec.d = gaD;
    std::vector<double> dir(gaN, 0.0);
    dir[0] = 1.0;
    auto est = estimate_isoperimetry(spec, halfspace(dir, 0.0), gaSamples, gaSeed);
    emit({{"params",
           {{"n", gaN}, {"d", gaD}, {"eps", gaEps}, {"samples", gaSamples}, {"seed", gaSeed}}},
          {"numerator", est.numerator},
          {"numeratorStderr", est.numeratorStderr},
          {"denominator", est.denominator},
          {"denominatorStderr", est.denominatorStderr},
          {"ratio", est.ratio}});
    return 0;
  }

  if (*gaTv) {
    const double delta = std::sqrt(gaEps * std::log(static_cast<double>(gaD)));
    emit({{"params", {{"d", gaD}, {"eps", gaEps}}},
          {"delta", delta},
          {"tv", tv_distance_shifted(delta, gaEps)}});
    return 0;
  }

  if (*gaMax) {
    auto st = max_gaussian_stats(gaD, gaSigma, gaSamples, gaSeed);
    emit({{"params",
           {{"d", gaD}, {"sigma", gaSigma}, {"samples", gaSamples}, {"seed", gaSeed}}},
          {"meanMax", st.meanMax},
          {"meanMaxStderr", st.meanMaxStderr},
          {"meanMaxSq", st.meanMaxSq},
          {"meanMaxSqStderr", st.meanMaxSqStderr}});
    return 0;
  }

  if (*gaPz) {
    std::vector<std::vector<double>> factor(gaN, std::vector<double>(gaN, 0.0));
    for (std::size_t i = 0; i < gaN; ++i)
      factor[i][i] = 1.0 / std::sqrt(static_cast<double>(gaN));
    auto pz = paley_zygmund_check(factor, gaSamples, gaSeed);
    emit({{"params", {{"n", gaN}, {"samples", gaSamples}, {"seed", gaSeed}}},
          {"probability", pz.probability},
          {"wilsonLow", pz.wilsonLow},
          {"wilsonHigh", pz.wilsonHigh}});
    return 0;
  }

  if (*reduce) {
    auto g = load_graph(redFile);
    ReductionParams p{redR, redEps, redD, redEta, redSamples, redSeed};
    auto fi = build_folded_instance(g, p);
    json vertexOf = json::array();
    for (const auto& v : fi.vertexOf) {
      json pairs = json::array();
      for (const auto& [gv, st] : v.pairs)
        pairs.push_back(json::array({gv, st == kS ? "s" : "t"}));
      vertexOf.push_back(std::move(pairs));
    }
    auto instJson = instance_to_json(fi.instance, false);
    if (!redOut.empty()) write_text(redOut, instJson.dump(2));
    emit({{"params",
           {{"graph", redFile},
            {"R", redR},
            {"eps", redEps},
            {"d", redD},
            {"eta", p.effective_eta()},
            {"samples", redSamples},
            {"seed", redSeed}}},
          {"variables", fi.instance.variables()},
          {"vertexOf", vertexOf},
          {"instance", std::move(instJson)}});
    return 0;
  }

  if (*corpus) {
    WeightedGraph g;
    json params = {{"generator", corpusGen}, {"seed", cSeed}};
    if (corpusGen == "cycle") {
      g = make_cycle(cN);
      params["n"] = cN;
    } else if (corpusGen == "clique") {
      g = make_clique(cN);
      params["n"] = cN;
    } else if (corpusGen == "star") {
      g = make_star(cN);
      params["n"] = cN;
    } else if (corpusGen == "hypercube") {
      g = make_hypercube(cDim);
      params["dim"] = cDim;
    } else if (corpusGen == "random-regular") {
      g = make_random_regular(cN, cD, cSeed);
      params["n"] = cN;
      params["d"] = cD;
    } else if (corpusGen == "barbell") {
      g = make_barbell(cK);
      params["k"] = cK;
    } else {
      g = make_two_cliques(cK);
      params["k"] = cK;
    }
    if (!corpusOut.empty()) write_text(corpusOut, graph_text(g));
    emit({{"params", std::move(params)},
          {"n", g.size()},
          {"m", g.edge_count()},
          {"graph", graph_text(g)}});
    return 0;
  }

  std::cerr << "no subcommand executed\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const vexp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
