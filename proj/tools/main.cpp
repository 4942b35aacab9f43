#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Minimal L-infinity models of finite-dimensional DGLAs over Q"};
    app.require_subcommand(1);
    linf::cli::Options opt;
    std::string output = "json";
    app.add_option("--output", output, "Report format")->check(CLI::IsMember({"json", "text"}));

    auto add_common = [&](CLI::App* sub, bool with_cap) {
        sub->add_option("spec", opt.spec_path, "DGLA spec (JSON)")->required();
        if (with_cap) {
            sub->add_option_function<int>("--cap", [&](const int& c) { opt.cap = c; }, "Highest arity (default 4, at most 6)");
        }
        sub->add_option("--output", output, "Report format")->check(CLI::IsMember({"json", "text"}));
        sub->add_flag("--timing", opt.timing, "Add wall time to the report");
    };
    auto* check = app.add_subcommand("check", "Validate the DGLA and its splitting");
    add_common(check, false);
    auto* transfer = app.add_subcommand("transfer", "Minimal model mu and the morphisms f, g");
    add_common(transfer, true);
    transfer->add_flag("--probe-normalization", opt.probe_normalization, "Try every alpha reading until one verifies");
    auto* invert = app.add_subcommand("invert", "Inverse of the decomposition isomorphism");
    add_common(invert, true);
    invert->add_flag("--probe-normalization", opt.probe_normalization, "Try every alpha reading until one verifies");
    auto* kur = app.add_subcommand("kuranishi", "Evaluate the Kuranishi map at a point of H^1");
    add_common(kur, true);
    kur->add_option_function<std::string>("--point", [&](const std::string& p) { opt.point = p; },
                                          "Comma separated p/q coordinates on H^1")
        ->required();
    auto* bounds = app.add_subcommand("bounds", "Norm bounds for mu and the inverse certificate");
    add_common(bounds, true);
    bounds->add_option_function<std::string>("--eps", [&](const std::string& e) { opt.eps = e; }, "Window eps as p/q");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    opt.command = app.get_subcommands().front()->get_name();
    opt.output = output;

    std::ifstream in(opt.spec_path);
    if (!in) {
        std::cerr << opt.spec_path << ": cannot open\n";
        return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    auto o = linf::cli::run(opt, ss.str());
    std::cout << o.out;
    std::cerr << o.err;
    return o.exit_code;
}
