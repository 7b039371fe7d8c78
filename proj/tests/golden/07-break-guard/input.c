int main() {
    int x;
    x = 0;
    while (x < 10) {
        break;
        x = 1;
    }
    return x;
}
