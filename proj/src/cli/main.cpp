#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mirnet/cli.hpp"
#include "mirnet/error.hpp"
#include "mirnet/manifest.hpp"

int main(int argc, char** argv) {
    CLI::App app{"mirnet: interaction networks from multivariate time series"};
    app.set_version_flag("--version", mirnet::kVersion);
    app.require_subcommand(1);

    mirnet::GenerateOptions gen;
    CLI::App* generate = app.add_subcommand(
        "generate", "Generate a synthetic dataset with known ground-truth wiring");
    generate
        ->add_option("kind", gen.kind,
                     "Dataset kind: cmn, logistic, triplets, gaussians, uniform-pair, "
                     "directed-pair")
        ->required()
        ->check(CLI::IsMember(
            {"cmn", "logistic", "triplets", "gaussians", "uniform-pair", "directed-pair"}));
    generate->add_option("-o,--output", gen.output, "Output CSV path (sidecars go next to it)")
        ->required();
    generate->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    generate->add_option("--length", gen.length, "Samples to keep (0 = kind default, 100000)");
    generate->add_option("--transient", gen.transient, "Samples to discard before recording")
        ->capture_default_str();
    generate->add_option("--alpha", gen.alpha, "Coupling strength (negative = kind default)");
    generate->add_option("--nodes", gen.nodes, "Node count for map networks (0 = kind default)");
    generate->add_option("--adjacency", gen.adjacency_file,
                         "JSON 0/1 matrix overriding the preset wiring (map networks)");
    generate->add_option("--map", gen.map_kind, "Map family for map networks: circle or logistic")
        ->check(CLI::IsMember({"circle", "logistic"}));
    generate->add_option("--map-r", gen.map_r, "Map parameter r (0 = map default)");
    generate->add_option("--map-k", gen.map_k, "Circle-map nonlinearity strength")
        ->capture_default_str();

    mirnet::InferOptions inf;
    bool no_header = false;
    CLI::App* infer =
        app.add_subcommand("infer", "Estimate pair weights and reconstruct the network");
    infer->add_option("input", inf.input, "Input CSV of channel columns")->required();
    infer
        ->add_option("-o,--output", inf.output_prefix,
                     "Output prefix; writes <prefix>.mir.json, .pairs.tsv, .network.json")
        ->required();
    infer->add_flag("--no-header", no_header, "Input CSV has no header row");
    infer->add_flag("--log-returns", inf.use_log_returns,
                    "Transform price columns to log-returns first");
    infer
        ->add_option("--reference", inf.reference,
                     "Attach a reference pair for the threshold: none, uniform, or directed")
        ->capture_default_str()
        ->check(CLI::IsMember({"none", "uniform", "directed"}));
    infer->add_option("--ref-seed", inf.ref_seed, "Seed for the attached reference pair")
        ->capture_default_str();
    infer->add_option("--gap", inf.gap, "Minimum weight step for the jump threshold")
        ->capture_default_str();
    infer->add_option("--grid-cap", inf.grid_cap, "Upper bound on the grid scan (0 = none)");
    infer->add_option("--horizon", inf.horizon, "Expansion look-ahead in steps")
        ->capture_default_str();
    infer->add_option("--threads", inf.threads, "Worker threads (0 = all cores)");

    mirnet::MetricsOptions met;
    CLI::App* metrics =
        app.add_subcommand("metrics", "Compute structural metrics of an inferred network");
    metrics->add_option("network", met.network, "A .network.json file from infer")->required();
    metrics->add_option("-o,--output", met.output,
                        "Report path (default: <name>.metrics.json next to the input)");
    metrics
        ->add_option("--ensemble", met.ensemble,
                     "Degree-preserving random graphs for the small-world baseline")
        ->capture_default_str();
    metrics->add_option("--seed", met.seed, "Seed for the randomised baseline")
        ->capture_default_str();

    mirnet::CompareOptions cmp;
    CLI::App* compare =
        app.add_subcommand("compare", "Compare an inferred network against ground truth");
    compare->add_option("inferred", cmp.inferred, "A .network.json file")->required();
    compare->add_option("truth", cmp.truth, "A dataset .meta.json or another .network.json")
        ->required();

    mirnet::RerunOptions rer;
    CLI::App* rerun = app.add_subcommand("rerun", "Repeat a recorded run from its manifest");
    rerun->add_option("manifest", rer.manifest, "A .manifest.json file from a previous run")
        ->required();
    rerun->add_option("-o,--output", rer.output,
                      "Redirect the rerun's output path or prefix (default: original)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        inf.has_header = !no_header;
        if (generate->parsed()) return mirnet::cmd_generate(gen);
        if (infer->parsed()) return mirnet::cmd_infer(inf);
        if (metrics->parsed()) return mirnet::cmd_metrics(met);
        if (compare->parsed()) return mirnet::cmd_compare(cmp);
        if (rerun->parsed()) return mirnet::cmd_rerun(rer);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
