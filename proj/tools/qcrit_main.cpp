#include <cstdio>
#include <exception>

#include "qcrit/errors.hpp"
#include "run_commands.hpp"

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const qcrit::schema_error& e) {
        std::fprintf(stderr, "schema error: %s\n", e.what());
        return 1;
    } catch (const qcrit::domain_error& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 2;
    } catch (const qcrit::convergence_error& e) {
        std::fprintf(stderr, "convergence error: %s\n", e.what());
        return 3;
    } catch (const qcrit::numerical_error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
