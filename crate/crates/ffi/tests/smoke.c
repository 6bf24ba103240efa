#include <math.h>
#include <stdio.h>
#include "rayleigh_mi.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s\n", #cond); return 1; } } while (0)

int main(void) {
    RmiRule *rule = NULL;
    CHECK(rmi_rule_half_range(15, &rule) == RMI_STATUS_OK);
    double mi = 0.0, lb = 0.0;
    CHECK(rmi_mutual_information(1.0, rule, rule, &mi) == RMI_STATUS_OK);
    CHECK(rmi_lower_bound(1.0, &lb) == RMI_STATUS_OK);
    CHECK(fabs(mi - 0.080547) < 1e-6);
    CHECK(lb < mi);
    RmiInfoPoint p;
    CHECK(rmi_info_point(10.0, rule, rule, &p) == RMI_STATUS_OK);
    CHECK(p.omega_sq == 10.0);
    CHECK(rmi_rule_half_range(0, &rule) == RMI_STATUS_INVALID_ARGUMENT);
    CHECK(rmi_last_error_message()[0] != '\0');
    rmi_rule_free(rule);
    printf("ok %.9f\n", mi);
    return 0;
}
