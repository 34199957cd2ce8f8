#pragma once

#include "tiletrack/packer.hpp"
#include "tiletrack/sim.hpp"

namespace tiletrack {

/// The user-provided detector slot: consumes one rendered canvas and returns
/// boxes in canvas coordinates.
class Detector {
public:
    virtual ~Detector() = default;
    virtual std::vector<Detection> detect(const RenderedCanvas& canvas) = 0;
};

/// Oracle stand-in: for every ground-truth object whose translated box
/// center lands on its placement's occupancy, emit the translated box
/// clipped to the placement's rendered footprint bbox, confidence 1.0.
/// Mirrors the unpack center rule so round trips are exact.
std::vector<Detection> oracle_detect_canvas(const RenderedCanvas& canvas, const Scenario& scenario,
                                            const TileGrid& grid);

class OracleCanvasDetector final : public Detector {
public:
    explicit OracleCanvasDetector(const Scenario& scenario) : scenario_(&scenario) {}
    std::vector<Detection> detect(const RenderedCanvas& canvas) override {
        return oracle_detect_canvas(canvas, *scenario_, scenario_->grid);
    }

private:
    const Scenario* scenario_;
};

} // namespace tiletrack
