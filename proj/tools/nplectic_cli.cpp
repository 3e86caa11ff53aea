//
// Command line front end.
//
//   nplectic verify <manifest-file-or-builtin-id> [--seed N] [--dims SPEC]
//                   [--count N] [--json] [--threads N]
//
// SPEC is either a range "1..5" or a comma list "1,2,4".  Builtin ids:
// symplectic-R2, volume-R3, paper-R6, darboux-R6.
//
// Exit codes: 0 all checks pass, 1 at least one check did not pass,
// 2 manifest parse error or bad invocation.
//

#include <nplectic/nplectic.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

bool parse_dims(const std::string& spec, std::vector<int>& out) {
    out.clear();
    const auto dotdot = spec.find("..");
    try {
        if (dotdot != std::string::npos) {
            const int lo = std::stoi(spec.substr(0, dotdot));
            const int hi = std::stoi(spec.substr(dotdot + 2));
            if (lo < 1 || hi < lo || hi > 9) return false;
            for (int d = lo; d <= hi; ++d) out.push_back(d);
            return true;
        }
        std::istringstream is(spec);
        std::string piece;
        while (std::getline(is, piece, ',')) {
            const int d = std::stoi(piece);
            if (d < 1 || d > 9) return false;
            out.push_back(d);
        }
    } catch (const std::exception&) {
        return false;
    }
    return !out.empty();
}

bool is_builtin(const std::string& id) {
    return id == "symplectic-R2" || id == "volume-R3" || id == "paper-R6" ||
           id == "darboux-R6";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification of higher-degree pairing identities"};
    app.require_subcommand(1);

    std::string input;
    std::string dims_spec = "1,2,3";
    std::uint64_t seed = 0;
    int count = 0;
    int threads = 0;
    bool json = false;

    CLI::App* verify = app.add_subcommand(
        "verify", "run the checks of a manifest file (or a builtin space id)");
    verify->add_option("input", input, "manifest file or builtin space id")->required();
    verify->add_option("--seed", seed, "random suite seed (default 0)");
    verify->add_option("--dims", dims_spec,
                       "identity dimensions for the random suite, e.g. 1..5 or 1,2,4");
    verify->add_option("--count", count, "random cases per suite entry (default 0: none)");
    verify->add_option("--threads", threads,
                       "worker threads (default: NPLECTIC_THREADS env var, else 1)");
    verify->add_flag("--json", json, "emit one JSON record per check instead of text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    nplectic::RunOptions opts;
    opts.seed = seed;
    opts.count = count;
    opts.threads = threads;
    if (!parse_dims(dims_spec, opts.dims)) {
        std::cerr << "bad --dims value '" << dims_spec << "': want e.g. 1..5 or 1,2,4\n";
        return 2;
    }

    std::string text;
    if (is_builtin(input)) {
        text = nplectic::render_manifest(nplectic::builtin_manifest(input));
    } else {
        std::ifstream in(input);
        if (!in) {
            std::cerr << "cannot open manifest file: " << input << "\n";
            return 2;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }

    nplectic::Manifest manifest;
    try {
        manifest = nplectic::parse_manifest(text);
    } catch (const nplectic::ParseError& e) {
        std::cerr << input << ": " << e.what() << "\n";
        return 2;
    } catch (const nplectic::Error& e) {
        std::cerr << input << ": " << e.what() << "\n";
        return 2;
    }

    const nplectic::Report report = nplectic::run(manifest, opts);
    std::cout << (json ? report.render_ndjson() : report.render());
    return report.all_pass() ? 0 : 1;
}
