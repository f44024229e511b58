/* cc smoke.c -I../include -L../../../target/release -l:libpsbm_ffi.a -lm -lpthread -ldl */
#include <stdio.h>
#include "psbm.h"

int main(void) {
    PsbSpace *gap = NULL;
    if (psb_space_builtin("quintic_gap", &gap) != PSB_STATUS_OK) {
        fprintf(stderr, "%s\n", psb_last_error());
        return 2;
    }
    bool converged = false;
    char *trace = NULL;
    if (psb_picard(gap, "7", 1000, &converged, &trace) != PSB_STATUS_OK) {
        fprintf(stderr, "%s\n", psb_last_error());
        psb_space_free(gap);
        return 2;
    }
    printf("%s\n", trace);
    psb_string_free(trace);

    double d = 0.0;
    if (psb_space_evaluate(gap, "3.5", "0", "0", &d) != PSB_STATUS_OK)
        printf("expected error: %s\n", psb_last_error());
    psb_space_free(gap);
    return converged ? 0 : 1;
}
