struct box { int w; int h; };
int main() {
    struct box b;
    struct box *pb;
    b.w = 4;
    b.h = 5;
    pb = &b;
    pb->w = pb->w + 1;
    return pb->w * pb->h;
}
