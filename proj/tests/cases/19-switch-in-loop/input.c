int main() {
    int i;
    int r;
    r = 0;
    for (i = 0; i < 8; i = i + 1) {
        switch (i % 4) {
        case 0:
            r = r + 1;
            break;
        case 1:
            continue;
        case 2:
            r = r * 2;
            break;
        default:
            break;
        }
        r = r + 10;
    }
    return r;
}
