int main() {
    int zPend;
    int r;
    zPend = 1;
    r = 0;
    switch (zPend) {
    case 0:
        r = 10;
        break;
    case 1:
        r = 20;
        break;
    default:
        r = 30;
        break;
    }
    return r;
}
