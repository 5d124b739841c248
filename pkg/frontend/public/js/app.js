/**
 * Wiring for the tuner page: sliders in, overlay out.
 *
 * All segmentation labels come from the service; this module only decodes
 * RLE, blends colors, and keeps the request discipline (debounced,
 * coalesced, one in flight) via RequestScheduler.
 */
import { MAX_UNITS, SNAP_UNITS, formatTheta, snapUnits, thetaParam, unitsToRadians, } from './angles.js';
import { ApiError, getThresholds, postEvaluate, postSegment, } from './api.js';
import { renderOverlay } from './overlay.js';
import { labelCss } from './palette.js';
import { bestPinIndex, canCompare, createPin, hasMiouColumn, } from './pins.js';
import { decodeRle, RleLengthError } from './rle.js';
import { RequestScheduler } from './scheduler.js';
function byId(id) {
    const el = document.getElementById(id);
    if (el === null)
        throw new Error(`missing element #${id}`);
    return el;
}
const DEFAULT_UNITS = [64, 64, 64];
export function startApp() {
    const state = {
        imageFile: null,
        maskFile: null,
        sourceRgba: null,
        width: 0,
        height: 0,
        mode: 'rgb',
        thetaUnits: [...DEFAULT_UNITS],
        opacity: 0.6,
        lastGood: null,
        pins: [],
    };
    const imageInput = byId('image-input');
    const maskInput = byId('mask-input');
    const grayToggle = byId('gray-toggle');
    const opacitySlider = byId('opacity');
    const canvas = byId('view');
    const statusLine = byId('status');
    const errorBox = byId('error-box');
    const errorText = byId('error-text');
    const retryButton = byId('retry');
    const staleBadge = byId('stale-badge');
    const histogramBox = byId('histogram');
    const miouBox = byId('miou');
    const thresholdsBox = byId('thresholds');
    const pinButton = byId('pin');
    const pinsBox = byId('pins');
    const sliders = [
        byId('theta1'),
        byId('theta2'),
        byId('theta3'),
    ];
    const sliderLabels = [
        byId('theta1-value'),
        byId('theta2-value'),
        byId('theta3-value'),
    ];
    const snaps = byId('theta-snaps');
    for (const units of SNAP_UNITS) {
        const option = document.createElement('option');
        option.value = String(units);
        snaps.appendChild(option);
    }
    const fetchTune = async (params) => {
        if (state.imageFile === null)
            throw new Error('no image loaded');
        const theta = [
            thetaParam(params.thetaUnits[0]),
            thetaParam(params.thetaUnits[1]),
            thetaParam(params.thetaUnits[2]),
        ];
        const segment = await postSegment(fetch.bind(globalThis), {
            image: state.imageFile,
            mode: params.mode,
            theta,
        });
        let miou = null;
        if (state.maskFile !== null) {
            const evaluation = await postEvaluate(fetch.bind(globalThis), {
                image: state.imageFile,
                mask: state.maskFile,
                theta,
            });
            miou = evaluation.miou;
        }
        let thresholds = null;
        if (params.mode === 'gray') {
            const response = await getThresholds(fetch.bind(globalThis), theta[0]);
            thresholds = response.thresholds;
        }
        return { segment, miou, thresholds };
    };
    const scheduler = new RequestScheduler(fetchTune, {
        onResult: (params, result) => {
            clearError();
            try {
                applyResult(params, result);
            }
            catch (error) {
                if (error instanceof RleLengthError) {
                    // Corrupt payload: show the failure, never a mismatched overlay.
                    state.lastGood = null;
                    paintSourceOnly();
                    showError(`bad response: ${error.message}`, false);
                }
                else {
                    throw error;
                }
            }
        },
        onError: (_params, error) => {
            if (error instanceof ApiError && error.status === 400) {
                showError(`rejected: ${error.message}`, false);
            }
            else {
                showError(String(error), true);
                staleBadge.hidden = state.lastGood === null;
            }
        },
    });
    function applyResult(params, result) {
        const pixels = result.segment.width * result.segment.height;
        const labels = decodeRle(result.segment.labels_rle, pixels);
        state.lastGood = { params, result, labels };
        staleBadge.hidden = true;
        repaint();
        renderHistogram(result.segment);
        renderMiou(result.miou);
        renderThresholds(params, result.thresholds);
        statusLine.textContent =
            `${result.segment.segment_count} segments, ` +
                `${result.segment.runtime_ms.toFixed(1)} ms`;
    }
    function repaint() {
        if (state.sourceRgba === null || state.lastGood === null) {
            paintSourceOnly();
            return;
        }
        const blended = renderOverlay(state.sourceRgba, state.lastGood.labels, state.opacity);
        const ctx = canvas.getContext('2d');
        ctx.putImageData(new ImageData(blended, state.width, state.height), 0, 0);
    }
    function paintSourceOnly() {
        if (state.sourceRgba === null)
            return;
        const ctx = canvas.getContext('2d');
        ctx.putImageData(new ImageData(new Uint8ClampedArray(state.sourceRgba), state.width, state.height), 0, 0);
    }
    function renderHistogram(segment) {
        histogramBox.replaceChildren();
        const entries = Object.entries(segment.label_histogram).sort((a, b) => Number(a[0]) - Number(b[0]));
        for (const [label, count] of entries) {
            const row = document.createElement('div');
            row.className = 'hist-row';
            const swatch = document.createElement('span');
            swatch.className = 'swatch';
            swatch.style.backgroundColor = labelCss(Number(label));
            const text = document.createElement('span');
            const share = ((100 * count) / (segment.width * segment.height)).toFixed(1);
            text.textContent = `label ${label}: ${count} px (${share}%)`;
            row.append(swatch, text);
            histogramBox.appendChild(row);
        }
    }
    function renderMiou(miou) {
        miouBox.textContent = miou === null ? '' : `mIOU ${miou.toFixed(4)}`;
    }
    function renderThresholds(params, thresholds) {
        if (params.mode !== 'gray' || thresholds === null) {
            thresholdsBox.textContent = '';
            return;
        }
        const parts = thresholds.map((t) => t.toFixed(4));
        thresholdsBox.textContent =
            `thresholds at θ=${formatTheta(params.thetaUnits[0])}: ${parts.join(', ')}`;
    }
    function showError(message, retryable) {
        errorBox.hidden = false;
        errorText.textContent = message;
        retryButton.hidden = !retryable;
    }
    function clearError() {
        errorBox.hidden = true;
        errorText.textContent = '';
        retryButton.hidden = true;
    }
    function requestSegment() {
        if (state.imageFile === null)
            return;
        scheduler.schedule({
            thetaUnits: [...state.thetaUnits],
            mode: state.mode,
        });
    }
    async function loadImage(file) {
        const bitmap = await createImageBitmap(file);
        state.width = bitmap.width;
        state.height = bitmap.height;
        canvas.width = bitmap.width;
        canvas.height = bitmap.height;
        const ctx = canvas.getContext('2d');
        ctx.drawImage(bitmap, 0, 0);
        state.sourceRgba = new Uint8ClampedArray(ctx.getImageData(0, 0, bitmap.width, bitmap.height).data);
        state.imageFile = file;
        state.lastGood = null;
        state.pins = [];
        renderPins();
        requestSegment();
    }
    imageInput.addEventListener('change', () => {
        const file = imageInput.files?.[0];
        if (file !== undefined)
            void loadImage(file);
    });
    maskInput.addEventListener('change', () => {
        state.maskFile = maskInput.files?.[0] ?? null;
        requestSegment();
    });
    sliders.forEach((slider, index) => {
        slider.max = String(MAX_UNITS);
        slider.value = String(DEFAULT_UNITS[index]);
        const label = sliderLabels[index];
        label.textContent = formatTheta(DEFAULT_UNITS[index]);
        slider.addEventListener('input', () => {
            const units = snapUnits(Number(slider.value));
            slider.value = String(units);
            state.thetaUnits[index] = units;
            label.textContent = formatTheta(units);
            if (state.mode === 'gray' && index === 0) {
                // Readout updates with the fetch; show the angle immediately.
                thresholdsBox.textContent = `thresholds at θ=${formatTheta(units)}: …`;
            }
            requestSegment();
        });
    });
    grayToggle.addEventListener('change', () => {
        state.mode = grayToggle.checked ? 'gray' : 'rgb';
        sliders[1].disabled = state.mode === 'gray';
        sliders[2].disabled = state.mode === 'gray';
        if (state.mode === 'rgb')
            thresholdsBox.textContent = '';
        requestSegment();
    });
    opacitySlider.addEventListener('input', () => {
        state.opacity = Number(opacitySlider.value);
        repaint();
    });
    retryButton.addEventListener('click', () => {
        clearError();
        scheduler.retry();
    });
    pinButton.addEventListener('click', () => {
        if (state.lastGood === null)
            return;
        const { params, result } = state.lastGood;
        state.pins.push(createPin(params.thetaUnits, params.mode, result.segment, result.miou));
        renderPins();
    });
    function renderPins() {
        pinsBox.replaceChildren();
        if (state.pins.length === 0)
            return;
        const withMiou = hasMiouColumn(state.pins);
        const best = bestPinIndex(state.pins);
        const table = document.createElement('table');
        const head = document.createElement('tr');
        const columns = ['θ₁', 'θ₂', 'θ₃', 'segments'];
        if (withMiou)
            columns.push('mIOU');
        for (const name of columns) {
            const th = document.createElement('th');
            th.textContent = name;
            head.appendChild(th);
        }
        table.appendChild(head);
        state.pins.forEach((pin, index) => {
            const row = document.createElement('tr');
            if (canCompare(state.pins) && index === best)
                row.className = 'best-pin';
            const cells = [
                formatTheta(pin.thetaUnits[0]),
                formatTheta(pin.thetaUnits[1]),
                formatTheta(pin.thetaUnits[2]),
                String(pin.response.segment_count),
            ];
            if (withMiou)
                cells.push(pin.miou === null ? '' : pin.miou.toFixed(4));
            for (const text of cells) {
                const td = document.createElement('td');
                td.textContent = text;
                row.appendChild(td);
            }
            table.appendChild(row);
        });
        pinsBox.appendChild(table);
    }
    // Surface the numeric bounds for keyboard users.
    for (const slider of sliders) {
        slider.title = `0 to ${formatTheta(MAX_UNITS)} (${unitsToRadians(MAX_UNITS).toFixed(4)} rad)`;
    }
}
startApp();
