// Produces a seeded random weight file so the detect/bench commands can run
// without a training pipeline.
#include <iostream>

#include "CLI11.hpp"

#include "fpnet/errors.hpp"
#include "fpnet/network.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Write a seeded random weight file"};
    std::uint64_t seed = 0;
    int classes = 5;
    std::string output = "weights.fpnw";
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--classes", classes, "Class count (background, face, parts)")
        ->check(CLI::Range(2, 1024));
    app.add_option("--output", output, "Output path");
    CLI11_PARSE(app, argc, argv);

    try {
        fpnet::save_weights(fpnet::random_weights(seed, classes), output);
    } catch (const fpnet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    std::cout << "wrote " << output << " (seed " << seed << ", " << classes << " classes)\n";
    return 0;
}
