// Adds features to a Maps Engine table.
function sendRequest(url, input, callback) {
  jQuery.ajax({
    url: url,
    type: "POST",
    data: input,
    dataType: "json",
    success: callback
  });
}

function updateLocation(aid, f) {
  var url = "https://www.googleapis.com/mapsengine/v1beta2/tables/" + aid + "/features/batchInsert";
  var input = {type: 'tables', features: f};
  sendRequest(url, input, function (response) {
    console.log(response);
  });
}
