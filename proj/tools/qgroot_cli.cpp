// qgroot: run one JSON job and print the JSON result.
//
//   qgroot job.json
//   qgroot --json '{"matrix":[[2]],"l":10,"cmd":"alcove"}'
//   qgroot < job.json

#include "qgroot/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Exact computations for small quantum groups at a root of unity"};
    std::string path, inline_json;
    app.add_option("config", path, "JSON job file ('-' or omitted: read stdin)");
    app.add_option("--json", inline_json, "JSON job given inline");
    CLI11_PARSE(app, argc, argv);

    std::string text;
    if (!inline_json.empty()) {
        text = inline_json;
    } else if (path.empty() || path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(path);
        if (!in) {
            std::cout << qgroot::cli::Json{{"error", "cannot open " + path}}.dump() << "\n";
            return 2;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    const auto result = qgroot::cli::run(text);
    std::cout << result.text();
    return result.exit_code;
}
