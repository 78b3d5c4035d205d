#include "admit/serialize.hpp"
#include "admit/underwriting.hpp"
#include "admit/witness_info.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw admit::PreconditionError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

admit::RegimeConfig load_regimes(const std::string& path) {
    const std::string text = path.empty() ? admit::default_regime_config_text() : read_file(path);
    return admit::parse_regime_config(text, admit::default_extractors());
}

admit::LoanCsv load_loans(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw admit::PreconditionError("cannot open " + path);
    admit::LoanCsv csv = admit::read_loans_csv(in);
    for (const auto& w : csv.warnings) std::cerr << "warning: " << path << ": " << w << "\n";
    return csv;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw admit::PreconditionError("cannot write " + path);
    return out;
}

std::size_t default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Admissibility-constrained underwriting decisions"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write a synthetic loan CSV");
    std::size_t gen_n = 1000;
    double gen_rate = 0.05;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("-n,--count", gen_n, "Number of loans")->capture_default_str();
    gen->add_option("--defect-rate", gen_rate, "Fraction of planted defects")->capture_default_str();
    gen->add_option("--seed", gen_seed, "Generator seed")->required();
    gen->add_option("-o,--out", gen_out, "Output CSV path")->required();

    // decide
    auto* dec = app.add_subcommand("decide", "Decide every loan in a CSV under one regime; prints JSON lines");
    std::string dec_loans, dec_regimes, dec_regime = "STRICT";
    std::uint64_t dec_seed = 0;
    dec->add_option("--loans", dec_loans, "Loan CSV")->required();
    dec->add_option("--regimes", dec_regimes, "Regime config JSON (default: built-in)");
    dec->add_option("--regime", dec_regime, "Regime name")->capture_default_str();
    dec->add_option("--seed", dec_seed, "Decision seed")->capture_default_str();

    // benchmark
    auto* bench = app.add_subcommand("benchmark", "Run the regime sweep and write report and audit log");
    std::string b_loans, b_regimes, b_out, b_audit;
    std::uint64_t b_seed = 0;
    std::size_t b_threads = default_threads();
    bench->add_option("--loans", b_loans, "Loan CSV")->required();
    bench->add_option("--regimes", b_regimes, "Regime config JSON (default: built-in)");
    bench->add_option("--out", b_out, "Report JSON path")->required();
    bench->add_option("--audit", b_audit, "Audit JSONL path");
    bench->add_option("--seed", b_seed, "Run seed")->required();
    bench->add_option("--threads", b_threads, "Worker threads")->capture_default_str();

    // audit-verify
    auto* verify = app.add_subcommand("audit-verify", "Replay an audit log and check bitwise reproduction");
    std::string v_audit, v_regimes;
    std::size_t v_threads = default_threads();
    verify->add_option("--audit", v_audit, "Audit JSONL path")->required();
    verify->add_option("--regimes", v_regimes, "Regime config JSON (default: built-in)");
    verify->add_option("--threads", v_threads, "Worker threads")->capture_default_str();

    // capacity
    auto* cap = app.add_subcommand("capacity", "Sketch capacity sweep; writes CSV");
    std::vector<std::size_t> c_n{64, 256};
    std::vector<double> c_delta{0.1, 0.2, 0.4};
    std::size_t c_trials = 300;
    std::uint64_t c_seed = 0;
    std::string c_out;
    std::size_t c_threads = default_threads();
    cap->add_option("-N,--items", c_n, "Item counts")->delimiter(',')->capture_default_str();
    cap->add_option("--delta", c_delta, "Overlap gaps")->delimiter(',')->capture_default_str();
    cap->add_option("--trials", c_trials, "Trials per grid point")->capture_default_str();
    cap->add_option("--seed", c_seed, "Seed")->capture_default_str();
    cap->add_option("-o,--out", c_out, "CSV path (default: stdout)");
    cap->add_option("--threads", c_threads, "Worker threads")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            auto out = open_out(gen_out);
            admit::write_loans_csv(out, admit::generate_dataset(gen_n, gen_rate, gen_seed));
            std::cerr << "wrote " << gen_n << " loans to " << gen_out << "\n";
        } else if (*dec) {
            const auto config = load_regimes(dec_regimes);
            const auto& regime = admit::find_regime(config.regimes, dec_regime);
            for (const auto& loan : load_loans(dec_loans).loans) {
                admit::OptimizerOptions o;
                o.seed = admit::decision_seed(dec_seed, loan.loan_id);
                const auto w = admit::extract_witnesses(loan, config.extractors);
                nlohmann::json j = admit::outcome_json(admit::interpret(w, regime, o));
                j["loan_id"] = loan.loan_id;
                j["policy_id"] = regime.name;
                std::cout << j.dump() << "\n";
            }
        } else if (*bench) {
            const auto config = load_regimes(b_regimes);
            const auto loans = load_loans(b_loans).loans;
            admit::BenchmarkOptions o;
            o.seed = b_seed;
            o.threads = b_threads;
            o.audit = !b_audit.empty();
            const auto start = std::chrono::steady_clock::now();
            const auto run = admit::run_benchmark(loans, config.regimes, config.extractors, o);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            auto report = open_out(b_out);
            report << admit::to_json(run.report).dump(2) << "\n";
            if (o.audit) {
                auto audit = open_out(b_audit);
                for (const auto& rec : run.audit) audit << rec.dump() << "\n";
            }
            for (const auto& row : run.report.rows) {
                std::cout << row.name << ": approved " << row.approved << ", rejected " << row.rejected << ", HAR "
                          << row.har << "%, defect rejection " << row.defect_rejection_rate << "%\n";
            }
            std::cout << "monotone: " << (run.report.monotonicity_verdict ? "yes" : "no") << " (" << loans.size()
                      << " loans in " << secs << " s)\n";
        } else if (*verify) {
            const auto config = load_regimes(v_regimes);
            std::ifstream in(v_audit);
            if (!in) throw admit::PreconditionError("cannot open " + v_audit);
            const auto v = admit::verify_audit(in, config.regimes, v_threads);
            std::cout << "verified: " << v.reproduced << "/" << v.total << " records reproduced\n";
            for (std::size_t i = 0; i < std::min<std::size_t>(v.mismatches.size(), 20); ++i) {
                std::cerr << "mismatch: " << v.mismatches[i] << "\n";
            }
            return v.reproduced == v.total ? 0 : 1;
        } else if (*cap) {
            admit::CapacityOptions o;
            o.threads = c_threads;
            std::vector<admit::CapacityResult> results;
            for (auto n : c_n)
                for (auto d : c_delta) results.push_back(admit::capacity_experiment(n, d, c_trials, c_seed, o));
            const std::string csv = admit::capacity_csv(results);
            if (c_out.empty()) {
                std::cout << csv;
            } else {
                open_out(c_out) << csv;
            }
            for (const auto& r : results) {
                std::cerr << "N=" << r.n_items << " delta=" << r.delta_gap << " m*="
                          << (r.m_star ? std::to_string(*r.m_star) : std::string("not reached")) << "\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
