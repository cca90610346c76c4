#pragma once

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zeon/analytic.hpp"
#include "zeon/io.hpp"
#include "zeon/poly.hpp"
#include "zeon/quadratic.hpp"
#include "zeon/solve.hpp"
#include "zeon/zeon.hpp"

namespace zeon::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kUsage = 1, kDomain = 2 };

struct Options {
    int n = -1;
    bool json_out = false;
    std::optional<double> tol;
    std::string config;
    std::string in_file;
    unsigned k = 2;
    bool principal = false;
    std::string fn = "exp";
    std::string seed;
    std::vector<std::string> inputs;
};

namespace detail {

[[noreturn]] inline void usage(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) usage("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/// Tolerances from builtin defaults, then ZEON_TOL, then the config file,
/// then --tol.
inline Tolerance resolve_tolerance(const Options& o)
{
    Tolerance tol;
    if (const char* env = std::getenv("ZEON_TOL"); env && *env) {
        try {
            tol.eq_eps = std::stod(env);
        } catch (const std::exception&) {
            usage("ZEON_TOL is not a number");
        }
    }
    if (!o.config.empty()) {
        std::istringstream lines(read_file(o.config));
        std::string line;
        while (std::getline(lines, line)) {
            line = trim(line.substr(0, line.find('#')));
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) usage("config line without '=': " + line);
            const std::string key = trim(line.substr(0, eq));
            double value = 0.0;
            try {
                value = std::stod(trim(line.substr(eq + 1)));
            } catch (const std::exception&) {
                usage("config value for '" + key + "' is not a number");
            }
            if (key == "eq_eps" || key == "tol") tol.eq_eps = value;
            else if (key == "prune_eps") tol.prune_eps = value;
            else if (key == "root_eps") tol.root_eps = value;
            else if (key == "cluster_eps") tol.cluster_eps = value;
            else usage("unknown config key '" + key + "'");
        }
    }
    if (o.tol) tol.eq_eps = *o.tol;
    try {
        tol.validate();
    } catch (const std::invalid_argument& e) {
        usage(e.what());
    }
    return tol;
}

// One raw input: either JSON or text.
struct Input {
    std::optional<json> j;
    std::string text;
};

inline Input classify(const std::string& raw)
{
    const std::string t = trim(raw);
    if (!t.empty() && (t.front() == '{' || t.front() == '[')) {
        try {
            return {json::parse(t), t};
        } catch (const json::parse_error& e) {
            usage(std::string("malformed JSON: ") + e.what());
        }
    }
    return {std::nullopt, t};
}

inline std::vector<Input> gather_inputs(const Options& o)
{
    std::vector<Input> out;
    if (!o.in_file.empty()) {
        const std::string content = read_file(o.in_file);
        Input whole = classify(content);
        if (whole.j && whole.j->is_array()) {
            for (const auto& item : *whole.j)
                out.push_back(item.is_string() ? Input{std::nullopt, item.get<std::string>()} : Input{item, item.dump()});
        } else if (whole.j) {
            out.push_back(std::move(whole));
        } else {
            std::istringstream lines(content);
            std::string line;
            while (std::getline(lines, line))
                if (!trim(line).empty()) out.push_back({std::nullopt, trim(line)});
        }
    }
    for (const auto& s : o.inputs) out.push_back(classify(s));
    return out;
}

inline int dimension(const Options& o, const std::vector<Input>& inputs)
{
    if (o.n >= 0) return o.n;
    for (const auto& in : inputs)
        if (in.j && in.j->is_object() && in.j->contains("n") && in.j->at("n").is_number_integer())
            return in.j->at("n").get<int>();
    usage("--n is required for text inputs");
}

inline Zeon as_zeon(const Input& in, int n)
{
    if (in.j) return io::zeon_from_json(*in.j, n);
    return io::parse_zeon(in.text, n);
}

inline ZeonPoly as_poly(const Input& in, int n)
{
    if (in.j) {
        auto p = io::poly_from_json(*in.j);
        if (p.n() != n) usage("polynomial dimension differs from --n");
        return p;
    }
    return io::parse_poly(in.text, n);
}

inline ComplexPoly as_scalar_poly(const Input& in, int n)
{
    const ZeonPoly p = as_poly(in, n);
    if (!p.has_scalar_coefficients()) usage("expected a polynomial with complex (scalar) coefficients");
    return scalar_projection(p);
}

inline void need(const std::vector<Input>& inputs, std::size_t count, const std::string& what)
{
    if (inputs.size() != count) usage("expected " + what);
}

inline AnalyticFunction function_named(const std::string& name)
{
    if (name == "exp") return functions::exp();
    if (name == "log") return functions::log();
    if (name == "sin") return functions::sin();
    if (name == "cos") return functions::cos();
    if (name == "sqrt") return functions::sqrt();
    std::string p;
    if (name.rfind("pow(", 0) == 0 && name.back() == ')') p = name.substr(4, name.size() - 5);
    else if (name.rfind("pow:", 0) == 0) p = name.substr(4);
    else usage("unknown function '" + name + "' (exp, log, sin, cos, sqrt, pow(p))");
    try {
        std::size_t used = 0;
        const double e = std::stod(p, &used);
        if (used != p.size()) throw std::invalid_argument(p);
        return functions::pow(e);
    } catch (const std::exception&) {
        usage("bad exponent in '" + name + "'");
    }
}

inline void emit_zeon(std::ostream& out, const Options& o, const Zeon& z)
{
    if (o.json_out) out << io::to_json(z).dump() << "\n";
    else out << io::to_text(z) << "\n";
}

inline void emit_domain_error(std::ostream& out, const Error& e, const json& extra = nullptr)
{
    json j = {{"error", std::string(e.name())}, {"message", e.what()}};
    if (!extra.is_null()) j["outcome"] = extra;
    out << j.dump() << "\n";
}

inline int run_command(const std::string& cmd, const Options& o, std::ostream& out)
{
    const Tolerance tol = resolve_tolerance(o);
    const auto inputs = gather_inputs(o);
    const int n = dimension(o, inputs);
    if (n < 1 || n > kMaxGenerators) usage("--n must be in 1..32");

    if (cmd == "eval") {
        need(inputs, 2, "a polynomial and a zeon");
        emit_zeon(out, o, eval(as_poly(inputs[0], n), as_zeon(inputs[1], n)));
    } else if (cmd == "inv") {
        need(inputs, 1, "one zeon");
        emit_zeon(out, o, inverse(as_zeon(inputs[0], n), tol));
    } else if (cmd == "root") {
        need(inputs, 1, "one zeon");
        const Zeon w = as_zeon(inputs[0], n);
        if (o.principal) {
            emit_zeon(out, o, principal_kth_root(w, o.k, tol));
        } else {
            const auto roots = kth_roots(w, o.k, tol);
            if (o.json_out) {
                json arr = json::array();
                for (const auto& r : roots) arr.push_back(io::to_json(r));
                out << arr.dump() << "\n";
            } else {
                for (const auto& r : roots) out << io::to_text(r) << "\n";
            }
        }
    } else if (cmd == "divide") {
        need(inputs, 2, "dividend and divisor polynomials");
        const auto res = divide(as_poly(inputs[0], n), as_poly(inputs[1], n), tol);
        if (o.json_out)
            out << json{{"quotient", io::to_json(res.quotient)}, {"remainder", io::to_json(res.remainder)}}.dump()
                << "\n";
        else
            out << "quotient: " << io::to_text(res.quotient) << "\nremainder: " << io::to_text(res.remainder) << "\n";
    } else if (cmd == "quad") {
        need(inputs, 3, "alpha, beta and gamma");
        const auto q = quadratic_solve(as_zeon(inputs[0], n), as_zeon(inputs[1], n), as_zeon(inputs[2], n), tol);
        if (q.kind == QuadraticKind::NoZeros) {
            emit_domain_error(out, Error(ErrorKind::NoZeros, q.note), io::to_json(q));
            return kDomain;
        }
        if (o.json_out) {
            out << io::to_json(q).dump() << "\n";
        } else {
            out << "kind: " << kind_name(q.kind) << "\n";
            out << "discriminant: " << io::to_text(q.discriminant) << "\n";
            for (const auto& z : q.zeros) out << "zero: " << io::to_text(z) << "\n";
            if (q.family_base) out << "family: " << q.note << "\n";
            if (q.kind == QuadraticKind::Undetermined) out << "note: " << q.note << "\n";
        }
    } else if (cmd == "solve") {
        need(inputs, 1, "one polynomial");
        const ZeonPoly phi = as_poly(inputs[0], n);
        if (!o.seed.empty()) {
            const auto z = spectrally_simple_zero(phi, io::parse_complex(o.seed), tol);
            if (o.json_out) out << io::to_json(z).dump() << "\n";
            else out << io::to_text(z.zero) << "\n";
        } else {
            const auto rep = split(phi, tol);
            if (o.json_out) {
                out << io::to_json(rep).dump() << "\n";
            } else {
                for (const auto& z : rep.zeros) out << io::to_text(z.zero) << "\n";
                for (const auto& f : rep.families) {
                    out << "family " << kind_name(f.kind) << " over " << io::format_complex(f.scalar) << ": "
                        << f.text;
                    if (f.base) out << " (base " << io::to_text(*f.base) << ")";
                    out << "\n";
                }
                for (const auto& w : rep.warnings) out << "warning: " << w << "\n";
            }
        }
    } else if (cmd == "classify") {
        need(inputs, 1, "one scalar polynomial");
        const auto c = classify_nilpotent_zeros(as_scalar_poly(inputs[0], n), n, tol);
        const char* verdict = c.infinitely_many ? "InfinitelyMany" : "NoNilpotentZeros";
        if (o.json_out) {
            json j = {{"result", verdict}, {"order", c.order}};
            j["witness"] = c.witness ? io::to_json(*c.witness) : json(nullptr);
            out << j.dump() << "\n";
        } else {
            out << verdict << " (d=" << c.order << ")";
            if (c.witness) out << " witness: a*" << io::to_text(*c.witness) << ", a != 0";
            out << "\n";
        }
    } else if (cmd == "member") {
        need(inputs, 2, "a scalar polynomial and a zeon");
        const bool yes = is_extension_zero(as_scalar_poly(inputs[0], n), as_zeon(inputs[1], n), tol);
        if (o.json_out) out << json{{"member", yes}}.dump() << "\n";
        else out << (yes ? "true" : "false") << "\n";
    } else if (cmd == "extend") {
        need(inputs, 1, "one zeon");
        emit_zeon(out, o, extend_eval({function_named(o.fn), n}, as_zeon(inputs[0], n), tol));
    } else if (cmd == "preimage") {
        need(inputs, 1, "one zeon");
        if (o.seed.empty()) usage("preimage needs --seed z0");
        const auto z = preimage({function_named(o.fn), n}, as_zeon(inputs[0], n), io::parse_complex(o.seed), tol);
        if (o.json_out) out << io::to_json(z).dump() << "\n";
        else out << io::to_text(z.zero) << "\n";
    } else {
        usage("unknown command '" + cmd + "'");
    }
    return kOk;
}

inline std::vector<std::string> split_command_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    bool in_token = false;
    char quote = 0;
    for (char c : line) {
        if (quote) {
            if (c == quote) quote = 0;
            else cur += c;
        } else if (c == '"' || c == '\'') {
            quote = c;
            in_token = true;
        } else if (c == ' ' || c == '\t') {
            if (in_token) out.push_back(cur);
            cur.clear();
            in_token = false;
        } else {
            cur += c;
            in_token = true;
        }
    }
    if (quote) usage("unterminated quote in batch line");
    if (in_token) out.push_back(cur);
    return out;
}

} // namespace detail

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

namespace detail {

inline int run_batch(const std::string& path, std::ostream& out, std::ostream& err)
{
    std::istringstream lines(read_file(path));
    std::vector<std::string> commands;
    std::string line;
    while (std::getline(lines, line)) {
        line = trim(line);
        if (!line.empty() && line.front() != '#') commands.push_back(line);
    }
    struct Result {
        int code;
        std::string out, err;
    };
    std::vector<std::future<Result>> jobs;
    for (const auto& cmd : commands)
        jobs.push_back(std::async(std::launch::async, [cmd] {
            std::ostringstream o, e;
            int code = kUsage;
            try {
                auto args = split_command_line(cmd);
                if (!args.empty() && args.front() == "zeon") args.erase(args.begin());
                code = run(args, o, e);
            } catch (const Error& ex) {
                e << "error: " << ex.what() << "\n";
            }
            return Result{code, o.str(), e.str()};
        }));
    int worst = kOk;
    for (auto& j : jobs) {
        auto r = j.get();
        out << r.out;
        err << r.err;
        worst = std::max(worst, r.code);
    }
    return worst;
}

} // namespace detail

/// Runs one invocation (arguments without the program name). Never throws.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Arithmetic, roots and zeros over complex zeon algebras", "zeon"};
    app.require_subcommand(0, 1);
    std::string batch;
    app.add_option("--batch", batch, "File with one command per line");

    Options o;
    struct Command {
        const char* name;
        const char* help;
    };
    const std::vector<Command> commands = {
        {"eval", "Evaluate a zeon polynomial at a zeon"},
        {"inv", "Multiplicative inverse"},
        {"root", "k-th roots of an invertible zeon"},
        {"divide", "Polynomial division with remainder"},
        {"quad", "Zeros of alpha u^2 + beta u + gamma"},
        {"solve", "Spectrally simple zero (--seed) or full splitting report"},
        {"classify", "Nilpotent zeros of a complex polynomial's extension"},
        {"member", "Is a zeon a zero of a complex polynomial's extension"},
        {"extend", "Zeon extension of an analytic function"},
        {"preimage", "Preimage under the extension of an analytic function"},
    };
    for (const auto& s : commands) {
        auto* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--n", o.n, "Generator count of CZ_n");
        sub->add_flag("--json", o.json_out, "Machine-readable output");
        sub->add_option("--tol", o.tol, "Approximate-equality tolerance (eq_eps)");
        sub->add_option("--config", o.config, "key=value tolerance file");
        sub->add_option("--in", o.in_file, "Read inputs from a file");
        sub->add_option("inputs", o.inputs, "Zeon / polynomial inputs");
        const std::string name = s.name;
        if (name == "root") {
            sub->add_option("--k", o.k, "Root order")->check(CLI::PositiveNumber);
            sub->add_flag("--principal", o.principal, "Only the principal root");
        }
        if (name == "extend" || name == "preimage") sub->add_option("--fn", o.fn, "exp, log, sin, cos, sqrt, pow(p)");
        if (name == "solve" || name == "preimage") sub->add_option("--seed", o.seed, "Scalar seed (lambda0 or z0)");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (!batch.empty()) return detail::run_batch(batch, out, err);
        const auto subs = app.get_subcommands();
        if (subs.empty()) {
            err << app.help();
            return kUsage;
        }
        return detail::run_command(subs.front()->get_name(), o, out);
    } catch (const Error& e) {
        if (is_domain_error(e.kind())) {
            detail::emit_domain_error(out, e);
            return kDomain;
        }
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

} // namespace zeon::cli
