#include <iostream>
#include <vector>

#include <CLI11.hpp>

#include "weylmod/acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> only;
    app.add_option("--only", only, "criterion ids (default: all)");
    CLI11_PARSE(app, argc, argv);
    bool all = true;
    for (const auto& r : weylmod::run_acceptance(only)) {
        std::cout << weylmod::format_result(r) << std::endl;
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
