// gcert: generate instances, prove and verify global certificates, audit
// soundness exhaustively and benchmark certificate sizes.

#include "gcert/csp.hpp"
#include "gcert/errors.hpp"
#include "gcert/harness.hpp"
#include "gcert/oracle.hpp"
#include "gcert/schemes.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

using namespace gcert;

namespace {

enum Exit { ok = 0, rejected = 1, usage = 2, prover_failed = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const std::string &path, std::string_view data)
{
    if (path.empty() || path == "-") {
        std::cout << data;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !out.write(data.data(), static_cast<std::streamsize>(data.size())))
        throw UsageError("cannot write " + path);
}

TargetGraph load_target(const std::string &spec)
{
    if (auto builtin = TargetGraph::builtin(spec))
        return *builtin;
    return parse_target(read_file(spec));
}

IdRangePolicy load_policy(const std::string &text, IdRange file_range)
{
    if (text.empty())
        return IdRangePolicy::fixed(file_range);
    auto policy = IdRangePolicy::parse(text);
    if (!policy)
        throw UsageError("invalid --id-range '" + text + "' (expected fixed:<M>, poly:<c> or doubexp)");
    return *policy;
}

bool is_prover_error(const Error &e)
{
    return dynamic_cast<const NotSatisfiable *>(&e) || dynamic_cast<const NoPerfectHash *>(&e) ||
           dynamic_cast<const BitmapTooLarge *>(&e);
}

struct Options {
    std::uint32_t n = 8;
    std::string target = "K2";
    double density = 0.5;
    std::uint64_t seed = 1;
    std::string id_range;
    bool csp_output = false;
    std::string out;

    std::string scheme = "hash";
    std::string graph_file;
    std::string csp_file;
    std::string cert_file;
    double lambda = 1.0;

    std::uint64_t max_n = 4;
    std::uint64_t max_certificates = 10'000'000;

    std::vector<std::uint32_t> sizes;
    std::vector<std::string> targets;
    std::vector<std::string> policies;
    std::vector<std::string> schemes;
    bool no_wall_time = false;
};

int run_gen(const Options &o)
{
    auto target = load_target(o.target);
    auto policy = load_policy(o.id_range.empty() ? "poly:4" : o.id_range, {});
    auto graph = random_h_colorable_graph(o.n, target, o.density, o.seed);
    auto ids = random_id_assignment(o.n, policy.at(o.n), o.seed + 1);
    write_output(o.out, o.csp_output ? serialize_csp(graph_to_csp(graph, ids, target)) : serialize_graph(graph, ids));
    return ok;
}

int run_prove(const Options &o)
{
    Certificate cert;
    if (o.scheme == "csp") {
        auto instance = parse_csp(read_file(o.csp_file));
        CspParams params{instance.domain_size(), load_policy(o.id_range, instance.ids().range()), o.lambda};
        cert = prove_csp(instance, params);
    }
    else {
        auto scheme = parse_scheme(o.scheme);
        if (!scheme)
            throw UsageError("unknown scheme '" + o.scheme + "'");
        auto instance = parse_graph(read_file(o.graph_file));
        SchemeParams params{load_target(o.target), load_policy(o.id_range, instance.ids.range()), o.lambda};
        cert = prove(*scheme, instance.graph, instance.ids, params);
    }
    auto bytes = serialize_certificate(cert);
    write_output(o.out, std::string_view(reinterpret_cast<const char *>(bytes.data()), bytes.size()));
    std::cerr << "payload_bits=" << certificate_size_bits(cert) << "\n";
    return ok;
}

int report_decisions(const std::vector<Decision> &decisions, const IdAssignment &ids, std::uint64_t size_bits)
{
    std::string rejecting;
    for (std::size_t v = 0; v < decisions.size(); ++v) {
        bool accept = decisions[v] == Decision::accept;
        std::cout << "node " << v << " id " << to_string(ids.ids()[v]) << (accept ? " accept" : " reject") << "\n";
        if (!accept)
            rejecting += " " + to_string(ids.ids()[v]);
    }
    std::cout << "payload_bits=" << size_bits << "\n";
    if (rejecting.empty()) {
        std::cout << "all_accept=true\n";
        return ok;
    }
    std::cout << "all_accept=false\nrejecting ids:" << rejecting << "\n";
    return rejected;
}

int run_verify(const Options &o)
{
    auto raw = read_file(o.cert_file);
    auto bytes = std::span(reinterpret_cast<const std::uint8_t *>(raw.data()), raw.size());
    if (!o.csp_file.empty()) {
        auto instance = parse_csp(read_file(o.csp_file));
        CspParams params{instance.domain_size(), load_policy(o.id_range, instance.ids().range()), o.lambda};
        Certificate cert{Scheme::hash, {}};
        try {
            cert = strip_padding(deserialize_certificate(bytes), params);
        }
        catch (const MalformedCertificate &) {
            // An unreadable file still reaches the nodes: as an empty payload every variable rejects.
        }
        return report_decisions(run_all_variables(instance, cert, params), instance.ids(),
                                certificate_size_bits(cert));
    }
    auto instance = parse_graph(read_file(o.graph_file));
    SchemeParams params{load_target(o.target), load_policy(o.id_range, instance.ids.range()), o.lambda};
    Certificate cert{Scheme::hash, {}};
    try {
        cert = strip_padding(deserialize_certificate(bytes), params);
    }
    catch (const MalformedCertificate &) {
    }
    auto result = run_all_nodes(instance.graph, instance.ids, cert, params);
    return report_decisions(result.decisions, instance.ids, result.size_bits);
}

int run_audit(const Options &o)
{
    AuditBounds bounds{o.max_n, o.max_certificates};
    AuditReport report;
    if (!o.csp_file.empty()) {
        auto instance = parse_csp(read_file(o.csp_file));
        CspParams params{instance.domain_size(), load_policy(o.id_range, instance.ids().range()), o.lambda};
        report = audit_csp_soundness(instance, params, bounds);
    }
    else {
        auto scheme = parse_scheme(o.scheme);
        if (!scheme)
            throw UsageError("unknown scheme '" + o.scheme + "'");
        auto instance = parse_graph(read_file(o.graph_file));
        SchemeParams params{load_target(o.target), load_policy(o.id_range, instance.ids.range()), o.lambda};
        report = audit_soundness(instance.graph, instance.ids, *scheme, params, bounds);
    }
    std::cout << format_report(report) << "\n";
    bool faithful = report.property_holds == report.certificate_accepted_exists && report.non_homomorphic_accepts == 0;
    return faithful ? ok : rejected;
}

int run_bench(const Options &o)
{
    std::vector<Scheme> schemes;
    for (const auto &name : o.schemes) {
        auto s = parse_scheme(name);
        if (!s)
            throw UsageError("unknown scheme '" + name + "'");
        schemes.push_back(*s);
    }
    std::vector<BenchSpec> specs;
    for (const auto &policy_text : o.policies) {
        auto policy = load_policy(policy_text, {});
        for (const auto &target_name : o.targets) {
            auto target = load_target(target_name);
            for (auto n : o.sizes) {
                if (n == 0)
                    throw UsageError("--n values must be positive");
                specs.push_back({n, target_name, target, policy});
            }
        }
    }
    auto rows = bench_sizes(specs, schemes, {o.seed, o.density, o.lambda});
    write_output(o.out, bench_csv(rows, !o.no_wall_time));
    return ok;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Global certification of graph homomorphism and CSPs"};
    app.require_subcommand(1);
    Options o;

    auto *gen = app.add_subcommand("gen", "Write a random H-colourable graph (or its CSP) to a file");
    gen->add_option("--n", o.n, "Number of vertices")->required()->check(CLI::Range(1u, 1u << 20));
    gen->add_option("--target", o.target, "Target H: K<k>, C<k> or a graph file");
    gen->add_option("--density", o.density, "Probability of each admissible edge")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--seed", o.seed, "Random seed");
    gen->add_option("--id-range", o.id_range, "fixed:<M> | poly:<c> | doubexp (default poly:4)");
    gen->add_flag("--csp", o.csp_output, "Write the equivalent CSP instead of the graph");
    gen->add_option("--out", o.out, "Output file (default stdout)");

    auto *prove_cmd = app.add_subcommand("prove", "Write an honest certificate");
    prove_cmd->add_option("--scheme", o.scheme, "hash | idlist | bitmap | csp")
        ->check(CLI::IsMember({"hash", "idlist", "bitmap", "csp"}));
    prove_cmd->add_option("--target", o.target, "Target H: K<k>, C<k> or a graph file");
    auto *prove_graph = prove_cmd->add_option("--graph", o.graph_file, "Graph file");
    auto *prove_csp_opt = prove_cmd->add_option("--csp", o.csp_file, "CSP file (with --scheme csp)");
    prove_graph->excludes(prove_csp_opt);
    prove_cmd->add_option("--out", o.out, "Certificate file")->required();
    prove_cmd->add_option("--id-range", o.id_range, "fixed:<M> | poly:<c> | doubexp (default fixed:<file M>)");
    prove_cmd->add_option("--lambda", o.lambda, "Bucket range multiplier for hash certificates")
        ->check(CLI::Range(1.0, 64.0));

    auto *verify_cmd = app.add_subcommand("verify", "Run every node's verifier on a certificate");
    auto *verify_graph = verify_cmd->add_option("--graph", o.graph_file, "Graph file");
    auto *verify_csp_opt = verify_cmd->add_option("--csp", o.csp_file, "CSP file");
    verify_graph->excludes(verify_csp_opt);
    verify_cmd->add_option("--cert", o.cert_file, "Certificate file")->required();
    verify_cmd->add_option("--target", o.target, "Target H: K<k>, C<k> or a graph file");
    verify_cmd->add_option("--id-range", o.id_range, "Must match the prover's");
    verify_cmd->add_option("--lambda", o.lambda, "Must match the prover's")->check(CLI::Range(1.0, 64.0));

    auto *audit_cmd = app.add_subcommand("audit", "Exhaustively search the certificate space");
    auto *audit_graph = audit_cmd->add_option("--graph", o.graph_file, "Graph file");
    auto *audit_csp_opt = audit_cmd->add_option("--csp", o.csp_file, "CSP file (hash layout)");
    audit_graph->excludes(audit_csp_opt);
    audit_cmd->add_option("--target", o.target, "Target H: K<k>, C<k> or a graph file");
    audit_cmd->add_option("--scheme", o.scheme, "hash | idlist | bitmap")
        ->check(CLI::IsMember({"hash", "idlist", "bitmap"}));
    audit_cmd->add_option("--id-range", o.id_range, "fixed:<M> | poly:<c> | doubexp (default fixed:<file M>)");
    audit_cmd->add_option("--max-n", o.max_n, "Largest claimed n to enumerate");
    audit_cmd->add_option("--max-certificates", o.max_certificates, "Refuse larger spaces");
    audit_cmd->add_option("--lambda", o.lambda, "Bucket range multiplier")->check(CLI::Range(1.0, 64.0));

    auto *bench_cmd = app.add_subcommand("bench", "Certificate sizes across schemes as CSV");
    bench_cmd->add_option("--n", o.sizes, "Graph sizes")->required()->delimiter(',');
    bench_cmd->add_option("--target", o.targets, "Targets")->delimiter(',')->default_str("K2");
    bench_cmd->add_option("--id-range", o.policies, "Id-range policies (repeatable)");
    bench_cmd->add_option("--schemes", o.schemes, "Schemes")->delimiter(',');
    bench_cmd->add_option("--seed", o.seed, "Random seed");
    bench_cmd->add_option("--density", o.density, "Edge density")->check(CLI::Range(0.0, 1.0));
    bench_cmd->add_option("--lambda", o.lambda, "Bucket range multiplier")->check(CLI::Range(1.0, 64.0));
    bench_cmd->add_option("--out", o.out, "CSV file (default stdout)");
    bench_cmd->add_flag("--no-wall-time", o.no_wall_time, "Write wall_ms as 0 for byte-identical output");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e) {
        app.exit(e);
        return usage;
    }

    try {
        if (*gen)
            return run_gen(o);
        if (*prove_cmd) {
            if (o.scheme == "csp" ? o.csp_file.empty() : o.graph_file.empty())
                throw UsageError(o.scheme == "csp" ? "--scheme csp needs --csp" : "prove needs --graph");
            return run_prove(o);
        }
        if (*verify_cmd) {
            if (o.graph_file.empty() && o.csp_file.empty())
                throw UsageError("verify needs --graph or --csp");
            return run_verify(o);
        }
        if (*audit_cmd) {
            if (o.graph_file.empty() && o.csp_file.empty())
                throw UsageError("audit needs --graph or --csp");
            return run_audit(o);
        }
        if (*bench_cmd) {
            if (o.targets.empty())
                o.targets = {"K2"};
            if (o.policies.empty())
                o.policies = {"poly:4"};
            if (o.schemes.empty())
                o.schemes = {"hash", "idlist", "bitmap"};
            return run_bench(o);
        }
    }
    catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    catch (const Error &e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return is_prover_error(e) ? prover_failed : usage;
    }
    return usage;
}
