#ifndef SEEK_DEFAULTS_HPP
#define SEEK_DEFAULTS_HPP

namespace seek {
namespace defaults {

// Scene graph sampling.
inline constexpr double kSpacingM = 1.0;    // location grid pitch
inline constexpr double kWallInsetM = 0.3;  // grid nodes keep this distance from walls

// Room belief.
inline constexpr double kKappa = 5.0;    // pseudo-count blending prior table with store counts
inline constexpr double kDSearch = 0.95; // P(detect | present, completed room search)

// Global planner.
inline constexpr double kEpsP = 1e-3;      // goal-probability floor (proper-policy guarantee)
inline constexpr double kViTol = 1e-6;     // value-iteration sup-norm stopping tolerance, meters
inline constexpr int kViMaxIter = 100000;

// Local controller.
inline constexpr double kCPromote = 0.3;   // detector confidence that opens active search
inline constexpr double kCInspect = 0.9;   // existence threshold for inspection
inline constexpr double kCDrop = 0.05;     // existence threshold for discarding a candidate
inline constexpr double kRViewM = 2.0;     // confirmation ring radius
inline constexpr double kRSuppressM = 1.0; // dropped candidates block re-promotion within this radius
inline constexpr double kRGateM = 1.0;     // detections this close to the estimate feed the candidate
inline constexpr int kMaxViews = 12;       // give up on a candidate after this many views
inline constexpr double kSeedExistence = 0.4;  // floor for a fresh candidate's existence
inline constexpr int kMinViewTicks = 6;    // sensing window a view must span
inline constexpr double kViewReal = 0.9;     // P(view detects | candidate real)
inline constexpr double kViewSpurious = 0.1; // P(view detects | candidate spurious)

// World simulator.
inline constexpr double kCellM = 0.1;
inline constexpr double kRMaxM = 5.0;
inline constexpr double kP0 = 0.9;
inline constexpr double kSigmaPosM = 0.2;
inline constexpr double kPFp = 0.01;
inline constexpr double kSigmaConf = 0.1;
inline constexpr double kNoiseClipSigmas = 4.0;

// Episode harness.
inline constexpr long kTMaxTicks = 20000;
inline constexpr double kEpsilonM = 1.0;  // success / inspect radius

// Baselines.
inline constexpr double kSemDistFloor = 0.05;

}  // namespace defaults
}  // namespace seek

#endif  // SEEK_DEFAULTS_HPP
