int base = 100;
int scale = 3;
int grid[4] = {1, 2, 3, 4};
int main() {
    int i;
    int s;
    s = base;
    for (i = 0; i < 4; i = i + 1) {
        s = s + grid[i] * scale;
    }
    return s;
}
