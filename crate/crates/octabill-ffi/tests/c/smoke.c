#include <stdio.h>
#include <string.h>
#include "octabill.h"

#define CHECK(x) do { if (!(x)) { fprintf(stderr, "failed: %s\n", #x); return 1; } } while (0)

int main(void) {
    ObQuad *a = NULL, *b = NULL, *c = NULL;
    CHECK(ob_quad_parse("1+r2", &a) == OB_STATUS_OK);
    CHECK(ob_quad_from_ints(-1, 1, &b) == OB_STATUS_OK);
    CHECK(ob_quad_arith(OB_OP_MUL, a, b, &c) == OB_STATUS_OK);
    char *s = ob_quad_to_string(c);
    CHECK(strcmp(s, "1+0*r2") == 0);
    ob_string_free(s);
    CHECK(ob_quad_parse("zz", &c) == OB_STATUS_PARSE);
    CHECK(strlen(ob_last_error()) > 0);

    ObDynamics *d = NULL;
    ObQuad *x = NULL, *y = NULL;
    CHECK(ob_dynamics_new(&d) == OB_STATUS_OK);
    CHECK(ob_dynamics_tile_center(d, 1, &x, &y) == OB_STATUS_OK);
    uint32_t code[3];
    CHECK(ob_dynamics_orbit_code(d, x, y, 3, code) == OB_STATUS_OK);
    CHECK(code[0] == 9 && code[1] == 25 && code[2] == 39);
    uint64_t period = 0;
    CHECK(ob_dynamics_period(d, x, y, 4, &period) == OB_STATUS_OK && period == 3);

    ob_quad_free(a);
    ob_quad_free(b);
    ob_quad_free(c);
    ob_quad_free(x);
    ob_quad_free(y);
    ob_dynamics_free(d);
    printf("ok\n");
    return 0;
}
