int main() {
    int x;
    int r;
    x = 5;
    r = 0;
    if (x > 3) {
        r = r + 1;
    }
    if (x < 3) {
        r = r + 10;
    } else {
        r = r + 100;
    }
    if (x == 5) {
        if (r > 50) {
            r = r * 2;
        }
    } else {
        r = -1;
    }
    return r;
}
