#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pmsval/commands.hpp"
#include "pmsval/errors.hpp"

namespace {

using pmsval::io::json;

json read_json(const std::string& path) {
    std::string text;
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(path);
        if (!in) throw pmsval::SchemaError("cannot open '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw pmsval::SchemaError(path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw pmsval::SchemaError("cannot write '" + path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo monotone sequences: classification, v_E and rank of the value group"};
    std::string command;
    std::string in_path = "-";
    std::string out_path;
    std::string dot_path;
    std::string probes_path;
    std::size_t tail_window = 0;
    std::size_t leaf_rank = 0;

    app.add_option("command", command, "Command to run")
        ->required()
        ->check(CLI::IsMember({"classify", "ve", "rank", "sup", "oracle-check", "probe", "leaves"}));
    app.add_option("--in", in_path, "Problem file (JSON); '-' reads stdin");
    app.add_option("--out", out_path, "Report file; stdout by default");
    app.add_option("--dot", dot_path, "Write the decision tree (Graphviz) here");
    app.add_option("--probes", probes_path, "JSON array of probe values");
    app.add_option("--tail-window", tail_window, "Tail window for oracle pattern fits")->check(CLI::PositiveNumber);
    app.add_option("--rank", leaf_rank, "Rank for 'leaves'")->check(CLI::Range(1, 4));
    CLI11_PARSE(app, argc, argv);

    pmsval::CommandResult result;
    try {
        pmsval::CommandOptions opt;
        if (tail_window) opt.tail_window = tail_window;
        if (leaf_rank) opt.rank = leaf_rank;
        if (!probes_path.empty()) opt.probes = read_json(probes_path);
        opt.want_dot = !dot_path.empty();
        const json problem = command == "leaves" && app.count("--in") == 0 ? json::object() : read_json(in_path);
        result = pmsval::run_command(command, problem, opt);
        if (result.dot) write_text(dot_path, *result.dot);
    } catch (const std::exception& e) {
        result = pmsval::error_report(e);
        std::cerr << result.report.dump(2) << "\n";
        return result.exit_code;
    }
    try {
        write_text(out_path, result.report.dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return result.exit_code;
}
