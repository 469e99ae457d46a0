#pragma once

#include <span>
#include <vector>

namespace echomark {

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

/// Threshold sweep from +inf down through every distinct score. Tied true
/// and false scores move both rates in one step, so the trapezoidal area
/// counts ties as one half.
struct RocResult {
    std::vector<RocPoint> points;   // (0,0) ... (1,1), monotone
    double auroc = 0.0;
    std::size_t n_true = 0;
    std::size_t n_false = 0;
};

RocResult roc(std::span<const double> true_scores, std::span<const double> false_scores);

/// Trapezoidal area under an ROC polyline.
double trapezoid_area(std::span<const RocPoint> points);

} // namespace echomark
