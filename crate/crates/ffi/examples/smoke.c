/* Build: cargo build --release -p rumin-ffi
 *        cc examples/smoke.c -Iinclude ../../target/release/librumin_ffi.a -lpthread -ldl -lm -o smoke */
#include <stdio.h>
#include "rumin.h"

int main(void) {
    RuminGrid *grid = NULL;
    RuminForm *omega = NULL, *phi = NULL;
    RuminSolveReport rep;
    if (rumin_grid_cube(2.0, 1.0, 33, &grid) != RUMIN_STATUS_OK) {
        fprintf(stderr, "%s\n", rumin_last_error());
        return 1;
    }
    if (rumin_form_sample_exact(grid, 7, 3, &omega) != RUMIN_STATUS_OK ||
        rumin_solve(omega, RUMIN_METHOD_LAPLACIAN, &phi, &rep) != RUMIN_STATUS_OK) {
        fprintf(stderr, "%s\n", rumin_last_error());
        return 1;
    }
    printf("degree %zu primitive, residual %.3e (L4), %zu iterations\n", rumin_form_degree(phi), rep.residual_lq, rep.iterations);
    if (rumin_grid_cube(-1.0, 1.0, 9, &grid) != RUMIN_STATUS_INVALID_ARGUMENT) return 1;
    printf("rejected: %s\n", rumin_last_error());
    rumin_form_free(phi);
    rumin_form_free(omega);
    rumin_grid_free(grid);
    return 0;
}
