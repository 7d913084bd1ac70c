#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "fica/coding.hpp"
#include "fica/distributions.hpp"
#include "fica/error.hpp"
#include "fica/experiments.hpp"
#include "fica/ica.hpp"
#include "fica/io.hpp"
#include "fica/verify.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kCapacity = 2;
constexpr int kVerifyFailed = 3;

// Ordered key/value output, printed as "key: value" lines or one JSON object.
class Report {
public:
    using Value = std::variant<double, std::int64_t, std::string, std::vector<double>>;

    void add(std::string key, Value v) { items_.emplace_back(std::move(key), std::move(v)); }

    void print(std::ostream& os, bool json) const {
        if (json) {
            nlohmann::ordered_json j;
            for (const auto& [k, v] : items_) std::visit([&](const auto& x) { j[k] = x; }, v);
            os << j.dump(2) << '\n';
            return;
        }
        os << std::setprecision(10);
        for (const auto& [k, v] : items_) {
            os << k << ": ";
            if (const auto* vec = std::get_if<std::vector<double>>(&v)) {
                for (std::size_t i = 0; i < vec->size(); ++i) os << (i ? " " : "") << (*vec)[i];
            } else {
                std::visit([&](const auto& x) {
                    if constexpr (!std::is_same_v<std::decay_t<decltype(x)>, std::vector<double>>) os << x;
                }, v);
            }
            os << '\n';
        }
    }

private:
    std::vector<std::pair<std::string, Value>> items_;
};

struct Common {
    std::uint32_t q = 2;
    std::size_t d = 8;
    std::size_t n = 10000;
    std::uint64_t seed = 1;
    std::size_t blocks = 2;
    std::size_t max_iter = 50;
    double epsilon = 1e-12;
    std::string format = "text";
    std::string out;
    std::string in;
    std::string pmf;
};

void add_input(CLI::App* cmd, Common& c) {
    cmd->add_option("--in", c.in, "Sample file (\"q d n\" header)");
    cmd->add_option("--pmf", c.pmf, "PMF file (\"q d\" header)");
}

void add_format(CLI::App* cmd, Common& c, const char* formats = "text,json") {
    std::vector<std::string> allowed;
    std::stringstream ss(formats);
    for (std::string tok; std::getline(ss, tok, ',');) allowed.push_back(tok);
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember(allowed));
}

void add_bloglica_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--blocks", c.blocks, "Number of blocks b")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", c.max_iter, "Iteration cap M")->check(CLI::PositiveNumber);
    cmd->add_option("--epsilon", c.epsilon, "Stop when an iteration gains less than this (bits)");
    cmd->add_option("--seed", c.seed, "Seed for the component shuffles");
}

fica::JointPMF load_input(const Common& c) {
    if (c.in.empty() == c.pmf.empty()) throw CLI::ValidationError("exactly one of --in or --pmf is required");
    return c.pmf.empty() ? fica::empirical_pmf(fica::load_samples(c.in)) : fica::load_pmf(c.pmf);
}

void emit(const Report& r, const Common& c) {
    if (c.out.empty()) {
        r.print(std::cout, c.format == "json");
        return;
    }
    std::ofstream os(c.out);
    if (!os) throw fica::FormatError("cannot write " + c.out);
    r.print(os, c.format == "json");
}

std::vector<double> column_entropies(const fica::LinearICAResult& r) { return r.component_entropies; }

std::vector<double> parse_reals(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ',');) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) throw CLI::ValidationError("bad number '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

void save_text_samples(const std::string& path, const fica::SampleSet& s) {
    if (path.empty())
        fica::write_samples(std::cout, s);
    else
        fica::save_samples(path, s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear ICA over finite fields: bounds, GLICA, BloGLICA, coding and experiments"};
    app.require_subcommand(1);
    Common c;

    // bound
    auto* bound = app.add_subcommand("bound", "Lower bound on the linear sum of marginal entropies");
    add_input(bound, c);
    add_format(bound, c);
    bound->add_option("--out", c.out, "Write the report here instead of stdout");

    // glica
    std::string mixing_in, matrix_out;
    bool dedup = false;
    auto* gl = app.add_subcommand("glica", "Greedy linear ICA");
    add_input(gl, c);
    add_format(gl, c);
    gl->add_option("--out", c.out, "Write the report here instead of stdout");
    gl->add_option("--mixing-matrix", mixing_in, "Known mixing matrix B; reports whether W B is monomial");
    gl->add_option("--matrix-out", matrix_out, "Write W in matrix text format");
    gl->add_flag("--dedup", dedup, "Scan one row per scalar-multiple class (q > 2)");

    // bloglica
    auto* bl = app.add_subcommand("bloglica", "Block-wise iterative GLICA");
    add_input(bl, c);
    add_format(bl, c);
    add_bloglica_flags(bl, c);
    bl->add_option("--out", c.out, "Write the report here instead of stdout");
    bl->add_option("--mixing-matrix", mixing_in, "Known mixing matrix B; reports whether W B is monomial");
    bl->add_option("--matrix-out", matrix_out, "Write W in matrix text format");

    // orderperm
    auto* op = app.add_subcommand("orderperm", "Order-permutation (non-linear) baseline");
    add_input(op, c);
    add_format(op, c);
    op->add_option("--out", c.out, "Write the report here instead of stdout");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate sample files");
    gen->require_subcommand(1);
    double s_exp = 1.01, a_shape = 3.0, b_shape = 3.0;
    std::string p_list;
    bool mix = false;
    std::string mixing_out;
    auto* gz = gen->add_subcommand("zipf", "Zipf law over q^d words, random word assignment");
    auto* gb = gen->add_subcommand("betabin", "Beta-Binomial over 2^d words, random word assignment");
    auto* gbe = gen->add_subcommand("bernoulli", "Independent Bernoulli sources, optionally mixed");
    for (auto* g : {gz, gb, gbe}) {
        g->add_option("--d", c.d, "Dimension")->check(CLI::Range(1, 62));
        g->add_option("--n", c.n, "Number of samples")->check(CLI::PositiveNumber);
        g->add_option("--seed", c.seed, "Seed");
        g->add_option("--out", c.out, "Sample file (stdout when omitted)");
    }
    gz->add_option("--q", c.q, "Prime field order");
    gz->add_option("--s", s_exp, "Zipf exponent");
    gb->add_option("--a", a_shape, "Beta shape a");
    gb->add_option("--b", b_shape, "Beta shape b");
    gbe->add_option("--p", p_list, "One probability for all sources or a comma list (default i/d)");
    gbe->add_flag("--mix", mix, "Mix the sources with a random invertible non-monomial matrix");
    gbe->add_option("--mixing-matrix", mixing_out, "Write the mixing matrix here (with --mix)");

    // compress / decompress
    std::string mode = "glica";
    auto* cp = app.add_subcommand("compress", "Transform and arithmetic-code a sample file");
    cp->add_option("--mode", mode, "Transform")->check(CLI::IsMember({"glica", "bloglica", "none"}));
    add_bloglica_flags(cp, c);
    cp->add_option("--in", c.in, "Sample file")->required();
    cp->add_option("--out", c.out, "Blob file")->required();
    add_format(cp, c);
    auto* dc = app.add_subcommand("decompress", "Decode a blob back to a sample file");
    dc->add_option("--in", c.in, "Blob file")->required();
    dc->add_option("--out", c.out, "Sample file (stdout when omitted)");

    // rate-report
    bool all = false, realistic = false;
    auto* rr = app.add_subcommand("rate-report", "Rates of the coding schemes on a sample file");
    rr->add_option("--in", c.in, "Sample file")->required();
    rr->add_flag("--all", all, "Also run the GLICA, BloGLICA and no-transform codecs");
    rr->add_flag("--realistic-dictionary", realistic, "Charge a canonical Huffman table instead of n0*d bits");
    add_bloglica_flags(rr, c);
    add_format(rr, c);
    rr->add_option("--out", c.out, "Write the report here instead of stdout");

    // experiment
    std::string exp_name;
    std::vector<std::string> sets;
    std::optional<std::string> ed, en, eq, eb, em;
    auto* ex = app.add_subcommand("experiment", "Run a named experiment, CSV or JSON output");
    ex->add_option("name", exp_name, "Experiment")->required()->check(CLI::IsMember(fica::experiment_names()));
    ex->add_option("--set", sets, "Parameter key=value (repeatable)");
    ex->add_option("--d", ed, "Dimension list or range (dims / d)");
    ex->add_option("--n", en, "Sample count(s) (n / ns)");
    ex->add_option("--q", eq, "Field order list (qs)");
    ex->add_option("--blocks", eb, "Block counts");
    ex->add_option("--max-iter", em, "BloGLICA iteration cap");
    ex->add_option("--seed", c.seed, "Master seed");
    c.format = "text";
    std::string exp_format = "csv";
    ex->add_option("--format", exp_format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    ex->add_option("--out", c.out, "Output file (stdout when omitted)");

    // verify
    std::vector<int> only;
    auto* vf = app.add_subcommand("verify", "Run the acceptance suite");
    vf->add_option("--only", only, "Criterion ids to run")->delimiter(',')->check(CLI::Range(1, 9));
    vf->add_option("--seed", c.seed, "Seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*bound) {
            const auto p = load_input(c);
            Report r;
            r.add("q", std::int64_t{p.q()});
            r.add("d", static_cast<std::int64_t>(p.d()));
            r.add("lower_bound", fica::linear_lower_bound(p));
            r.add("identity", fica::marginal_entropy_sum(p));
            r.add("joint_entropy", fica::entropy(p.probs()));
            emit(r, c);
        } else if (*gl || *bl) {
            const bool block = bl->parsed();
            fica::LinearICAResult res;
            std::vector<double> trace;
            if (block) {
                fica::BloglicaConfig cfg{c.blocks, c.max_iter, c.epsilon, c.seed};
                fica::BloglicaResult br;
                if (!c.in.empty() && c.pmf.empty())
                    br = fica::bloglica(fica::load_samples(c.in), cfg);
                else
                    br = fica::bloglica(load_input(c), cfg);
                res = br.result;
                trace = br.trace;
            } else {
                res = fica::glica(load_input(c), {dedup, fica::Execution::parallel});
            }
            Report r;
            r.add("objective", res.objective);
            if (res.lower_bound) r.add("lower_bound", *res.lower_bound);
            r.add("rows_examined", static_cast<std::int64_t>(res.rows_examined));
            r.add("component_entropies", column_entropies(res));
            if (block) r.add("trace", trace);
            if (!mixing_in.empty()) {
                const auto b = fica::load_matrix(mixing_in);
                r.add("recovered", std::string(fica::is_monomial(fica::multiply(res.w, b)) ? "yes" : "no"));
            }
            if (!matrix_out.empty()) fica::save_matrix(matrix_out, res.w);
            emit(r, c);
        } else if (*op) {
            const auto p = load_input(c);
            const auto res = fica::order_permutation(p);
            Report r;
            r.add("objective", res.objective);
            r.add("total_correlation", res.total_correlation);
            r.add("identity", fica::marginal_entropy_sum(p));
            emit(r, c);
        } else if (*gz) {
            if (!fica::is_prime(c.q)) throw CLI::ValidationError("--q must be prime");
            const auto m = fica::checked_power(c.q, c.d, fica::kDefaultCapacityLog2);
            save_text_samples(c.out, fica::sample_zipf(m, s_exp, c.n, c.seed).to_samples(c.q, c.d));
        } else if (*gb) {
            const auto m = fica::checked_power(2, c.d, fica::kDefaultCapacityLog2);
            save_text_samples(c.out, fica::sample_beta_binomial(m, a_shape, b_shape, c.n, c.seed).to_samples(2, c.d));
        } else if (*gbe) {
            auto params = p_list.empty() ? fica::ramp_parameters(c.d) : parse_reals(p_list);
            if (params.size() == 1) params.assign(c.d, params.front());
            if (params.size() != c.d) throw CLI::ValidationError("--p needs 1 or d values");
            if (mix) {
                if (c.d < 2) throw CLI::ValidationError("--mix needs d >= 2");
                const auto m = fica::mixed_bernoulli_sources(params, c.n, c.seed);
                save_text_samples(c.out, m.mixed);
                if (!mixing_out.empty()) fica::save_matrix(mixing_out, m.mixing);
            } else {
                save_text_samples(c.out, fica::sample_bernoulli_product(params, c.n, c.seed));
            }
        } else if (*cp) {
            const auto samples = fica::load_samples(c.in);
            fica::CompressOptions opt;
            opt.mode = mode == "glica" ? fica::TransformMode::glica
                       : mode == "bloglica" ? fica::TransformMode::bloglica
                                            : fica::TransformMode::none;
            opt.blocks = c.blocks;
            opt.max_iterations = c.max_iter;
            opt.epsilon = c.epsilon;
            opt.seed = c.seed;
            const auto blob = fica::compress(samples, opt);
            fica::save_bytes(c.out, blob.serialize());
            const auto rate = fica::blob_rate(blob, mode);
            Report r;
            r.add("scheme", rate.scheme);
            r.add("total_bits", rate.total_bits);
            r.add("bits_per_symbol", rate.bits_per_symbol());
            r.add("model_bits", rate.model_bits);
            r.add("payload_bits", rate.payload_bits);
            r.print(std::cout, c.format == "json");
        } else if (*dc) {
            const auto blob = fica::CompressedBlob::parse(fica::load_bytes(c.in));
            save_text_samples(c.out, fica::decompress(blob));
        } else if (*rr) {
            const auto samples = fica::load_samples(c.in);
            std::vector<fica::RateReport> rates;
            rates.push_back(fica::huffman_dictionary_rate(
                samples, realistic ? fica::DictionaryModel::canonical : fica::DictionaryModel::per_symbol));
            rates.push_back(fica::marginal_rate_no_transform(samples));
            if (all) {
                fica::CompressOptions opt;
                opt.blocks = std::min(c.blocks, samples.d());
                opt.max_iterations = c.max_iter;
                opt.epsilon = c.epsilon;
                opt.seed = c.seed;
                const std::pair<fica::TransformMode, const char*> modes[] = {
                    {fica::TransformMode::glica, "glica-codec"},
                    {fica::TransformMode::bloglica, "bloglica-codec"},
                    {fica::TransformMode::none, "none-codec"}};
                for (const auto& [m, name] : modes) {
                    opt.mode = m;
                    try {
                        rates.push_back(fica::blob_rate(fica::compress(samples, opt), name));
                    } catch (const fica::CapacityError& e) {
                        std::cerr << name << " skipped: " << e.what() << '\n';
                    }
                }
            }
            if (c.format == "json") {
                nlohmann::ordered_json j = nlohmann::ordered_json::array();
                for (const auto& r : rates)
                    j.push_back({{"scheme", r.scheme},
                                 {"n", r.n},
                                 {"total_bits", r.total_bits},
                                 {"bits_per_symbol", r.bits_per_symbol()},
                                 {"model_bits", r.model_bits},
                                 {"payload_bits", r.payload_bits},
                                 {"ideal_payload_bits", r.ideal_payload_bits}});
                std::ostringstream os;
                os << j.dump(2) << '\n';
                if (c.out.empty()) {
                    std::cout << os.str();
                } else {
                    std::ofstream f(c.out);
                    f << os.str();
                }
            } else {
                std::ostringstream os;
                os << std::left << std::setw(18) << "scheme" << std::right << std::setw(16) << "bits/symbol"
                   << std::setw(16) << "model bits" << std::setw(16) << "payload bits" << std::setw(16)
                   << "n*H_emp" << '\n'
                   << std::fixed << std::setprecision(4);
                for (const auto& r : rates) {
                    os << std::left << std::setw(18) << r.scheme << std::right << std::setw(16) << r.bits_per_symbol()
                       << std::setw(16) << r.model_bits << std::setw(16) << r.payload_bits << std::setw(16);
                    if (r.ideal_payload_bits > 0.0 || r.payload_bits == 0.0)
                        os << r.ideal_payload_bits << '\n';
                    else
                        os << "-" << '\n';
                }
                if (c.out.empty()) {
                    std::cout << os.str();
                } else {
                    std::ofstream f(c.out);
                    f << os.str();
                }
            }
        } else if (*ex) {
            fica::ExperimentSpec spec;
            spec.name = exp_name;
            spec.seed = c.seed;
            const auto& keys = fica::experiment_keys(exp_name);
            const auto has = [&](const char* k) { return std::find(keys.begin(), keys.end(), k) != keys.end(); };
            const auto put = [&](const std::optional<std::string>& v, std::initializer_list<const char*> names) {
                if (!v) return;
                for (const char* k : names)
                    if (has(k)) {
                        spec.params[k] = *v;
                        return;
                    }
                throw CLI::ValidationError("experiment " + exp_name + " does not take this flag");
            };
            put(ed, {"dims", "d"});
            put(en, {"n", "ns"});
            put(eq, {"qs"});
            put(eb, {"blocks"});
            put(em, {"max_iter"});
            for (const auto& kv : sets) {
                const auto eq_pos = kv.find('=');
                if (eq_pos == std::string::npos) throw CLI::ValidationError("--set expects key=value");
                spec.params[kv.substr(0, eq_pos)] = kv.substr(eq_pos + 1);
            }
            const auto rows = fica::run_experiment(spec);
            const auto fmt = exp_format == "json" ? fica::OutputFormat::json : fica::OutputFormat::csv;
            if (c.out.empty())
                std::cout << (fmt == fica::OutputFormat::json ? fica::results_json(spec, rows) : fica::results_csv(rows));
            else
                fica::write_results(c.out, fmt, spec, rows);
        } else if (*vf) {
            const auto results = fica::run_verification(std::cout, only, c.seed);
            std::size_t passed = 0;
            for (const auto& r : results) passed += r.passed;
            std::cout << passed << "/" << results.size() << " criteria passed\n";
            return passed == results.size() ? 0 : kVerifyFailed;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const fica::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return kCapacity;
    } catch (const std::bad_alloc&) {
        std::cerr << "capacity error: out of memory for the requested table\n";
        return kCapacity;
    } catch (const fica::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return 0;
}
