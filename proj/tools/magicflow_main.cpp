#include <exception>
#include <iostream>

#include "magicflow/experiment.hpp"

int main(int argc, char** argv) {
  using namespace magicflow;
  try {
    const ExperimentConfig cfg = parse_config(argc, argv);
    return run_experiment(cfg);
  } catch (const CLI::CallForHelp&) {
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
