// Two adversaries watch a directional sender. When a person attenuates one
// path, the sender turns toward that side and raises its strength just
// enough that both observers keep reading their baselines.

#include <iostream>

#include "veil/veil.hpp"

int main() {
    veil::Scene2D scene;
    scene.adversary_angles = {0.3, 1.5};
    scene.base_strength = 20.0;
    scene.max_strength = 20.8;
    scene.decay_slope = 2.0;

    std::cout << "adversaries at 0.3 and 1.5 rad, slope 2 per rad, baseline 20, cap "
              << scene.max_strength << "\n";
    std::cout << "baselines: " << veil::fmt_g9(veil::baseline_reading(scene, 0)) << " / "
              << veil::fmt_g9(veil::baseline_reading(scene, 1)) << "\n\n";

    for (double delta : {0.0, 0.5, 1.0, 2.0, 4.0, 6.0}) {
        scene.interference_delta = delta;
        const veil::BeamSolution sol = veil::solve_two_adversary(scene, 0);
        std::cout << "person effect " << delta << ": ";
        if (!sol.feasible) {
            std::cout << "cannot hide (" << sol.reason << ")\n";
            continue;
        }
        std::cout << "aim " << veil::fmt_g9(sol.theta) << " rad at strength "
                  << veil::fmt_g9(sol.alpha) << " -> readings "
                  << veil::fmt_g9(veil::gradual_reading(scene, sol.theta, sol.alpha, 0, true))
                  << " / "
                  << veil::fmt_g9(veil::gradual_reading(scene, sol.theta, sol.alpha, 1, false))
                  << "\n";
    }
    return 0;
}
