/* mMerge: translated from code matrix mrg2 */
#include <assert.h>
#include "matrixcode_rt.h"

void mMerge(Trinity *tri) {
    typedef enum { A, B, C, D, E, F, G, H, S } State;
    State state = S;
    int64_t u, v;
    while (true) {
        switch (state) {
        case A:
            if (mc_getR(tri, &v)) { state = C; }
            else { state = D; }
            break;
        case B:
            if (mc_getR(tri, &v)) { mc_putR(tri); state = B; }
            else { state = H; }
            break;
        case C:
            if (u <= v) { mc_putL(tri); state = E; }
            else { mc_putR(tri); state = A; }
            break;
        case D:
            mc_putL(tri); state = F;
            break;
        case E:
            if (mc_getL(tri, &u)) { state = C; }
            else { state = G; }
            break;
        case F:
            if (mc_getL(tri, &u)) { state = D; }
            else { state = H; }
            break;
        case G:
            mc_putR(tri); state = B;
            break;
        case H:
            return;
        case S:
            if (mc_getL(tri, &u)) { state = A; }
            else { state = B; }
            break;
        }
    }
}
